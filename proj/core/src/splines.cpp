#include "igabem/splines.hpp"

#include <cmath>
#include <stdexcept>

namespace igabem {

KnotVector::KnotVector(std::vector<double> k, int p) : knots(std::move(k)), degree(p) {
  if (p < 0) throw std::invalid_argument("KnotVector: negative degree");
  const int n = static_cast<int>(knots.size());
  if (n - p - 1 <= p) throw std::invalid_argument("KnotVector: too few knots");
  for (int i = 0; i + 1 < n; ++i)
    if (knots[i] > knots[i + 1])
      throw std::invalid_argument("KnotVector: knots not nondecreasing");
  for (int i = 0; i <= p; ++i)
    if (knots[i] != knots.front() || knots[n - 1 - i] != knots.back())
      throw std::invalid_argument("KnotVector: not clamped");
}

int KnotVector::find_span(double x) const {
  const int p = degree;
  const int k = size();
  // spans live between knots[p] and knots[k]
  if (x >= knots[k]) {
    int j = k - 1;
    while (knots[j + 1] <= knots[j]) --j;
    return j;
  }
  int lo = p, hi = k;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (x < knots[mid])
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

KnotVector make_uniform_knots(int p, int level, int rep) {
  if (p < 0 || level < 0) throw std::invalid_argument("make_uniform_knots: bad p/L");
  if (rep < 1 || rep > p + 1)
    throw std::invalid_argument("make_uniform_knots: knot repetition must be in [1, p+1]");
  const int nel = 1 << level;
  std::vector<double> k;
  k.reserve(2 * (p + 1) + (nel - 1) * rep);
  for (int i = 0; i <= p; ++i) k.push_back(0.0);
  for (int i = 1; i < nel; ++i)
    for (int r = 0; r < rep; ++r) k.push_back(static_cast<double>(i) / nel);
  for (int i = 0; i <= p; ++i) k.push_back(1.0);
  return KnotVector(std::move(k), p);
}

KnotVector truncate_knots(const KnotVector& kv) {
  if (kv.degree < 1) throw std::invalid_argument("truncate_knots: degree must be >= 1");
  std::vector<double> k(kv.knots.begin() + 1, kv.knots.end() - 1);
  return KnotVector(std::move(k), kv.degree - 1);
}

namespace {

void check_domain(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("eval_basis: parameter outside [0,1]");
}

// Local triangular de Boor recursion: values of the p+1 functions
// b_{span-p..span} at x. left/right are scratch of size p+1.
void basis_values(const KnotVector& kv, int span, double x, Eigen::VectorXd& out) {
  const int p = kv.degree;
  out.resize(p + 1);
  out[0] = 1.0;
  Eigen::VectorXd left(p + 1), right(p + 1);
  for (int j = 1; j <= p; ++j) {
    left[j] = x - kv.knots[span + 1 - j];
    right[j] = kv.knots[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double den = right[r + 1] + left[j - r];
      const double tmp = den > 0.0 ? out[r] / den : 0.0;
      out[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    out[j] = saved;
  }
}

}  // namespace

int eval_basis(const KnotVector& kv, double x, Eigen::VectorXd& out) {
  check_domain(x);
  const int span = kv.find_span(x);
  basis_values(kv, span, x, out);
  return span - kv.degree;
}

void eval_basis_span(const KnotVector& kv, int span, double x, Eigen::VectorXd& out) {
  basis_values(kv, span, x, out);
}

namespace {

void deriv_values(const KnotVector& kv, int span, double x, int order,
                  Eigen::VectorXd& out);

}  // namespace

void eval_basis_deriv_span(const KnotVector& kv, int span, double x, int order,
                           Eigen::VectorXd& out) {
  deriv_values(kv, span, x, order, out);
}

int eval_basis_deriv(const KnotVector& kv, double x, int order, Eigen::VectorXd& out) {
  check_domain(x);
  const int span = kv.find_span(x);
  deriv_values(kv, span, x, order, out);
  return span - kv.degree;
}

namespace {

void deriv_values(const KnotVector& kv, int span, double x, int order,
                  Eigen::VectorXd& out) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("eval_basis_deriv: order must be 1 or 2");
  const int p = kv.degree;
  out = Eigen::VectorXd::Zero(p + 1);
  if (order > p) return;

  // Derivative of degree-p splines as a difference of degree-(p-order)
  // values with factors p!/(p-order)!/(knot spans).
  const int q = p - order;
  Eigen::VectorXd low;
  // values of degree-q functions b^q_{span-q..span}
  {
    KnotVector sub = kv;  // same knots, lower degree uses same span arithmetic
    sub.degree = q;
    basis_values(sub, span, x, low);
  }
  // Derivatives of each b^p_{first+i} independently, via repeated
  //   (b^p_j)' = p/(t_{j+p}-t_j) b^{p-1}_j - p/(t_{j+p+1}-t_{j+1}) b^{p-1}_{j+1}
  // expanded over the degree-q values nonzero at x.
  const int first = span - p;
  for (int i = 0; i <= p; ++i) {
    // c over degree (p-m) functions starting at index first+?
    std::vector<double> c(1, 1.0);
    int lo = first + i;  // first index of current support
    int deg = p;
    for (int m = 0; m < order; ++m) {
      std::vector<double> nc(c.size() + 1, 0.0);
      for (size_t r = 0; r < c.size(); ++r) {
        const int j = lo + static_cast<int>(r);
        const double d1 = kv.knots[j + deg] - kv.knots[j];
        const double d2 = kv.knots[j + deg + 1] - kv.knots[j + 1];
        if (d1 > 0.0) nc[r] += c[r] * deg / d1;
        if (d2 > 0.0) nc[r + 1] -= c[r] * deg / d2;
      }
      c = std::move(nc);
      --deg;
    }
    // accumulate: sum_r c[r] * b^q_{lo+r}(x); q-functions nonzero at x are
    // indices span-q .. span.
    double v = 0.0;
    for (size_t r = 0; r < c.size(); ++r) {
      const int j = lo + static_cast<int>(r);
      const int off = j - (span - q);
      if (off >= 0 && off <= q) v += c[r] * low[off];
    }
    out[i] = v;
  }
}

}  // namespace

void PatchSurface::validate() const {
  const int n = count_u() * count_v();
  if (ctrl_w.cols() != n || weight.size() != n)
    throw std::invalid_argument("PatchSurface: control grid does not match basis counts");
  if ((weight.array() <= 0.0).any())
    throw std::invalid_argument("PatchSurface: weights must be strictly positive");
}

PatchJet eval_patch(const PatchSurface& s, double u, double v) {
  Eigen::VectorXd bu, bv, du, dv;
  const int fu = eval_basis(s.kv_u, u, bu);
  const int fv = eval_basis(s.kv_v, v, bv);
  eval_basis_deriv(s.kv_u, u, 1, du);
  eval_basis_deriv(s.kv_v, v, 1, dv);

  const int pu = s.kv_u.degree, pv = s.kv_v.degree;
  const int ku = s.count_u();

  // weighted numerator N = sum c*w*b, denominator W = sum w*b, and their
  // parametric derivatives
  Eigen::Vector3d N = Eigen::Vector3d::Zero(), Nu = Eigen::Vector3d::Zero(),
                  Nv = Eigen::Vector3d::Zero();
  double W = 0.0, Wu = 0.0, Wv = 0.0;
  for (int j = 0; j <= pv; ++j) {
    for (int i = 0; i <= pu; ++i) {
      const int idx = (fu + i) + (fv + j) * ku;
      const double w = s.weight[idx];
      const Eigen::Vector3d cw = s.ctrl_w.col(idx);
      N += cw * (bu[i] * bv[j]);
      Nu += cw * (du[i] * bv[j]);
      Nv += cw * (bu[i] * dv[j]);
      W += w * bu[i] * bv[j];
      Wu += w * du[i] * bv[j];
      Wv += w * bu[i] * dv[j];
    }
  }
  PatchJet jet;
  jet.x = N / W;
  jet.du = (Nu - jet.x * Wu) / W;
  jet.dv = (Nv - jet.x * Wv) / W;
  return jet;
}

}  // namespace igabem
