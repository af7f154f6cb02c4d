#include "igabem/operators.hpp"

#include <stdexcept>

namespace igabem {

Eigen::Vector3cd maxwell_dipole(const Eigen::Vector3d& x, const Eigen::Vector3d& y0,
                                const Eigen::Vector3d& p, cplx kappa) {
  const Eigen::Vector3d d = x - y0;
  const double r = d.norm();
  if (r == 0.0) throw std::domain_error("maxwell_dipole: evaluation at the source");
  const Eigen::Vector3d rhat = d / r;
  const cplx g = helmholtz_g(r, kappa);
  const cplx gp = g * (-cplx(0, 1) * kappa - 1.0 / r);
  const cplx gpp = g * ((-cplx(0, 1) * kappa - 1.0 / r) * (-cplx(0, 1) * kappa - 1.0 / r) +
                        1.0 / (r * r));
  // E = kappa^2 g p + (g'' - g'/r) (rhat.p) rhat + (g'/r) p
  return kappa * kappa * g * p.cast<cplx>() +
         (gpp - gp / r) * rhat.dot(p) * rhat.cast<cplx>() + (gp / r) * p.cast<cplx>();
}

namespace {

// nodes, weights and per-node geometry shared by all evaluation points
struct ElementQuadCache {
  std::vector<Eigen::Vector3d> x;       // surface points
  std::vector<double> w;                // weight * sqrt_g * h^2
  std::vector<Eigen::VectorXd> value;   // scalar shapes per node
  std::vector<Eigen::Matrix3Xd> field;  // vector shapes per node
  std::vector<Eigen::VectorXd> dive;
};

ElementQuadCache cache_element(const Discretization& disc, int e, int q) {
  const auto& rule = gauss_rule(q);
  const auto& el = disc.element(e);
  ElementQuadCache c;
  const bool vec = disc.pde().is_vector();
  c.x.reserve(q * q);
  c.w.reserve(q * q);
  for (int b = 0; b < q; ++b)
    for (int a = 0; a < q; ++a) {
      const double ul = rule.nodes[a], vl = rule.nodes[b];
      const auto f = disc.geometry().frame(el.patch, el.origin.x() + el.h * ul,
                                           el.origin.y() + el.h * vl);
      auto s = disc.sample_shapes(e, ul, vl);
      c.x.push_back(f.x);
      c.w.push_back(rule.weights[a] * rule.weights[b] * f.sqrt_g * el.h * el.h);
      if (vec) {
        c.field.push_back(std::move(s.field));
        c.dive.push_back(std::move(s.divergence));
      } else {
        c.value.push_back(std::move(s.value));
      }
    }
  return c;
}

template <typename Scalar>
void check_density(const Discretization& disc, const Eigen::Matrix<Scalar, -1, 1>& rho) {
  if (rho.size() != disc.dof_count())
    throw std::invalid_argument("eval_potential: density size does not match the space");
}

}  // namespace

namespace {

template <typename Scalar>
std::pair<int, ShapeSample> locate_and_sample(const Discretization& disc, int patch,
                                              double u, double v) {
  const int n = 1 << disc.level();
  const int ix = std::min(static_cast<int>(u * n), n - 1);
  const int iy = std::min(static_cast<int>(v * n), n - 1);
  const int e = disc.element_index(patch, ix, iy);
  const auto& el = disc.element(e);
  return {e, disc.sample_shapes(e, (u - el.origin.x()) / el.h, (v - el.origin.y()) / el.h)};
}

template <typename Scalar>
Scalar eval_density_impl(const Discretization& disc,
                         const Eigen::Matrix<Scalar, -1, 1>& rho, int patch, double u,
                         double v) {
  const auto [e, sh] = locate_and_sample<Scalar>(disc, patch, u, v);
  Scalar val(0);
  for (int l = 0; l < disc.local_count(); ++l)
    val += rho[disc.local_to_global(e, l)] * disc.local_sign(e, l) * sh.value[l];
  return val;
}

}  // namespace

double eval_density(const Discretization& disc, const Eigen::VectorXd& rho, int patch,
                    double u, double v) {
  return eval_density_impl(disc, rho, patch, u, v);
}

cplx eval_density(const Discretization& disc, const Eigen::VectorXcd& rho, int patch,
                  double u, double v) {
  return eval_density_impl(disc, rho, patch, u, v);
}

Eigen::Vector3cd eval_current(const Discretization& disc, const Eigen::VectorXcd& rho,
                              int patch, double u, double v) {
  const auto [e, sh] = locate_and_sample<cplx>(disc, patch, u, v);
  Eigen::Vector3cd j = Eigen::Vector3cd::Zero();
  for (int l = 0; l < disc.local_count(); ++l)
    j += rho[disc.local_to_global(e, l)] * disc.local_sign(e, l) *
         sh.field.col(l).cast<cplx>();
  return j;
}

Eigen::VectorXd eval_potential(const Discretization& disc, const Eigen::VectorXd& density,
                               const std::vector<Eigen::Vector3d>& pts, int quad_order) {
  check_density(disc, density);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(pts.size());
  const int ne = disc.element_count();
  const int nl = disc.local_count();
  for (int e = 0; e < ne; ++e) {
    const auto c = cache_element(disc, e, quad_order);
    // density restricted to this element at every node
    Eigen::VectorXd rho_at(c.x.size());
    for (size_t n = 0; n < c.x.size(); ++n) {
      double acc = 0;
      for (int l = 0; l < nl; ++l)
        acc += density[disc.local_to_global(e, l)] * disc.local_sign(e, l) * c.value[n][l];
      rho_at[n] = acc;
    }
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < pts.size(); ++i) {
      double acc = 0;
      for (size_t n = 0; n < c.x.size(); ++n)
        acc += laplace_g((pts[i] - c.x[n]).norm()) * rho_at[n] * c.w[n];
      out[i] += acc;
    }
  }
  return out;
}

Eigen::VectorXcd eval_potential(const Discretization& disc, const Eigen::VectorXcd& density,
                                const std::vector<Eigen::Vector3d>& pts, int quad_order) {
  check_density(disc, density);
  const cplx kappa = disc.pde().kappa;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(pts.size());
  const int ne = disc.element_count();
  const int nl = disc.local_count();
  for (int e = 0; e < ne; ++e) {
    const auto c = cache_element(disc, e, quad_order);
    Eigen::VectorXcd rho_at(c.x.size());
    for (size_t n = 0; n < c.x.size(); ++n) {
      cplx acc = 0;
      for (int l = 0; l < nl; ++l)
        acc += density[disc.local_to_global(e, l)] * disc.local_sign(e, l) * c.value[n][l];
      rho_at[n] = acc;
    }
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < pts.size(); ++i) {
      cplx acc = 0;
      for (size_t n = 0; n < c.x.size(); ++n)
        acc += helmholtz_g((pts[i] - c.x[n]).norm(), kappa) * rho_at[n] * c.w[n];
      out[i] += acc;
    }
  }
  return out;
}

Eigen::Matrix3Xcd eval_maxwell_potential(const Discretization& disc,
                                         const Eigen::VectorXcd& density,
                                         const std::vector<Eigen::Vector3d>& pts,
                                         int quad_order) {
  check_density(disc, density);
  if (!disc.pde().is_vector())
    throw std::invalid_argument("eval_maxwell_potential: scalar discretization");
  const cplx kappa = disc.pde().kappa;
  const cplx inv_k2 = 1.0 / (kappa * kappa);
  Eigen::Matrix3Xcd out = Eigen::Matrix3Xcd::Zero(3, pts.size());
  const int ne = disc.element_count();
  const int nl = disc.local_count();
  for (int e = 0; e < ne; ++e) {
    const auto c = cache_element(disc, e, quad_order);
    std::vector<Eigen::Vector3cd> j_at(c.x.size());
    Eigen::VectorXcd div_at(c.x.size());
    for (size_t n = 0; n < c.x.size(); ++n) {
      Eigen::Vector3cd jv = Eigen::Vector3cd::Zero();
      cplx dv = 0;
      for (int l = 0; l < nl; ++l) {
        const cplx coef = density[disc.local_to_global(e, l)] * disc.local_sign(e, l);
        jv += coef * c.field[n].col(l).cast<cplx>();
        dv += coef * c.dive[n][l];
      }
      j_at[n] = jv;
      div_at[n] = dv;
    }
#pragma omp parallel for schedule(static)
    for (size_t i = 0; i < pts.size(); ++i) {
      Eigen::Vector3cd acc = Eigen::Vector3cd::Zero();
      for (size_t n = 0; n < c.x.size(); ++n) {
        const Eigen::Vector3d d = pts[i] - c.x[n];
        const double r = d.norm();
        const cplx g = helmholtz_g(r, kappa);
        // grad_x G = g'(r) * d/r
        const cplx gp_over_r = g * (-cplx(0, 1) * kappa - 1.0 / r) / r;
        acc += c.w[n] * (g * j_at[n] + inv_k2 * gp_over_r * div_at[n] * d.cast<cplx>());
      }
      out.col(i) += acc;
    }
  }
  return out;
}

}  // namespace igabem
