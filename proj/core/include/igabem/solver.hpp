// Matrix-free Krylov solvers consuming only the GEMV contract.
#pragma once

#include <chrono>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace igabem {

template <typename Scalar>
struct LinearOperator {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  int dim = 0;
  std::function<Vec(const Vec&)> apply;
};

template <typename Scalar, typename Mat>
LinearOperator<Scalar> make_operator(const Mat& a) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  return {static_cast<int>(a.rows()), [&a](const Vec& x) -> Vec { return a * x; }};
}

namespace detail {
template <typename T>
T conj_s(const T& v) {
  if constexpr (std::is_floating_point_v<T>)
    return v;
  else
    return std::conj(v);
}
}  // namespace detail

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 1000;
  int restart = 30;
};

struct SolveStats {
  int iterations = 0;
  double residual = 0;
  bool converged = false;
  double seconds = 0;
};

// Restarted GMRES, modified Gram-Schmidt with one reorthogonalization
// pass on detected loss of orthogonality. Convergence is decided on the
// true residual recomputed at every restart, since compressed matvecs
// make the Arnoldi estimate optimistic.
template <typename Scalar>
std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>, SolveStats> gmres(
    const LinearOperator<Scalar>& a, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
    const SolverOptions& opts = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto t0 = std::chrono::steady_clock::now();
  if (b.size() != a.dim) throw std::invalid_argument("gmres: dimension mismatch");
  SolveStats st;
  Vec x = Vec::Zero(a.dim);
  const double nb = b.norm();
  auto finish = [&](Vec xv) {
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::make_pair(std::move(xv), st);
  };
  if (nb == 0) {
    st.converged = true;
    return finish(std::move(x));
  }
  const int kr = std::min(opts.restart, a.dim);
  Mat v(a.dim, kr + 1);
  Mat h = Mat::Zero(kr + 1, kr);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cs(kr), sn(kr), g(kr + 1);

  double best_res = std::numeric_limits<double>::infinity();
  Vec best_x = x;
  while (st.iterations < opts.max_iter) {
    Vec r = b - a.apply(x);
    const double nr = r.norm();
    st.residual = nr / nb;
    if (st.residual < best_res) {
      best_res = st.residual;
      best_x = x;
    }
    if (st.residual <= opts.tol) {
      st.converged = true;
      return finish(std::move(x));
    }
    v.col(0) = r / nr;
    g.setZero();
    g[0] = Scalar(nr);
    int k = 0;
    for (; k < kr && st.iterations < opts.max_iter; ++k, ++st.iterations) {
      Vec w = a.apply(v.col(k));
      const double nw0 = w.norm();
      for (int i = 0; i <= k; ++i) {
        h(i, k) = v.col(i).dot(w);
        w -= h(i, k) * v.col(i);
      }
      if (w.norm() < 0.7 * nw0) {  // reorthogonalize once
        for (int i = 0; i <= k; ++i) {
          const Scalar c = v.col(i).dot(w);
          h(i, k) += c;
          w -= c * v.col(i);
        }
      }
      const double nw = w.norm();
      h(k + 1, k) = Scalar(nw);
      if (nw > 0) v.col(k + 1) = w / nw;
      // apply accumulated Givens rotations, then generate a new one
      for (int i = 0; i < k; ++i) {
        const Scalar t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -detail::conj_s(sn[i]) * h(i, k) + detail::conj_s(cs[i]) * h(i + 1, k);
        h(i, k) = t;
      }
      const double rho = std::sqrt(std::norm(h(k, k)) + std::norm(h(k + 1, k)));
      if (rho == 0) {
        cs[k] = Scalar(1);
        sn[k] = Scalar(0);
      } else {
        cs[k] = detail::conj_s(h(k, k)) / Scalar(rho);
        sn[k] = detail::conj_s(h(k + 1, k)) / Scalar(rho);
      }
      h(k, k) = Scalar(rho);
      h(k + 1, k) = Scalar(0);
      const Scalar t = cs[k] * g[k] + sn[k] * g[k + 1];
      g[k + 1] = -detail::conj_s(sn[k]) * g[k] + detail::conj_s(cs[k]) * g[k + 1];
      g[k] = t;
      if (std::abs(g[k + 1]) / nb <= opts.tol || nw == 0) {
        ++k;
        ++st.iterations;
        break;
      }
    }
    if (k > 0) {
      const Vec y = h.topLeftCorner(k, k).template triangularView<Eigen::Upper>().solve(
          g.head(k));
      x += v.leftCols(k) * y;
    } else {
      break;  // stagnation: no progress possible
    }
  }
  Vec r = b - a.apply(x);
  st.residual = r.norm() / nb;
  if (st.residual < best_res) {
    best_res = st.residual;
    best_x = x;
  }
  st.converged = best_res <= opts.tol;
  st.residual = best_res;
  return finish(std::move(best_x));
}

// Conjugate gradients for symmetric positive definite operators
// (caller-asserted); aborts on detected negative curvature.
template <typename Scalar>
std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>, SolveStats> cg(
    const LinearOperator<Scalar>& a, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
    const SolverOptions& opts = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto t0 = std::chrono::steady_clock::now();
  if (b.size() != a.dim) throw std::invalid_argument("cg: dimension mismatch");
  SolveStats st;
  Vec x = Vec::Zero(a.dim);
  auto finish = [&](Vec xv) {
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::make_pair(std::move(xv), st);
  };
  const double nb = b.norm();
  if (nb == 0) {
    st.converged = true;
    return finish(std::move(x));
  }
  Vec r = b;
  Vec p = r;
  double rr = r.squaredNorm();
  while (st.iterations < opts.max_iter) {
    st.residual = std::sqrt(rr) / nb;
    if (st.residual <= opts.tol) {
      st.converged = true;
      return finish(std::move(x));
    }
    const Vec ap = a.apply(p);
    const double pap = std::real(p.dot(ap));
    if (pap <= 0) break;  // not positive definite; return best iterate
    const double alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    ++st.iterations;
  }
  st.residual = std::sqrt(rr) / nb;
  st.converged = st.residual <= opts.tol;
  return finish(std::move(x));
}

}  // namespace igabem
