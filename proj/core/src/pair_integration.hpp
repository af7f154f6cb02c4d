// Internal: element-pair Galerkin integration shared by the dense and
// compressed assembly paths. Not installed.
#pragma once

#include <array>
#include <type_traits>

#include "igabem/assembly.hpp"

namespace igabem::detail {

// Kernel evaluations at transformed points can land below this distance
// only through rounding; the distance is clamped so the (Jacobian-damped)
// integrand stays finite.
constexpr double kMinDist = 1e-14;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
Scalar kernel(const Pde& pde, double r) {
  if constexpr (std::is_same_v<Scalar, double>)
    return laplace_g(r);
  else
    return helmholtz_g(r, pde.kappa);
}

// Weighted shape data of one element at a tensor Gauss grid, reused by
// every far pair the element participates in.
template <typename Scalar>
struct FarCache {
  Eigen::Matrix3Xd pts;
  MatX<Scalar> value;                 // scalar kinds: w * phi_l
  std::array<MatX<Scalar>, 3> field;  // Maxwell: w * component of j_l
  MatX<Scalar> dive;                  // Maxwell: w * div j_l
};

template <typename Scalar>
FarCache<Scalar> make_far_cache(const Discretization& disc, int e, int n) {
  const auto& rule = gauss_rule(n);
  const auto& el = disc.element(e);
  const bool vec = disc.pde().is_vector();
  const int nl = disc.local_count();
  const int nn = n * n;
  FarCache<Scalar> c;
  c.pts.resize(3, nn);
  if (vec) {
    for (auto& f : c.field) f.resize(nn, nl);
    c.dive.resize(nn, nl);
  } else {
    c.value.resize(nn, nl);
  }
  int idx = 0;
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a, ++idx) {
      const double ul = rule.nodes[a], vl = rule.nodes[b];
      const auto f = disc.geometry().frame(el.patch, el.origin.x() + el.h * ul,
                                           el.origin.y() + el.h * vl);
      const double w = rule.weights[a] * rule.weights[b] * f.sqrt_g * el.h * el.h;
      const auto s = disc.sample_shapes(e, ul, vl);
      c.pts.col(idx) = f.x;
      if (vec) {
        for (int d = 0; d < 3; ++d)
          c.field[d].row(idx) = (w * s.field.row(d)).template cast<Scalar>();
        c.dive.row(idx) = (w * s.divergence.transpose()).template cast<Scalar>();
      } else {
        c.value.row(idx) = (w * s.value.transpose()).template cast<Scalar>();
      }
    }
  return c;
}

// local Galerkin block of a far pair from the caches
template <typename Scalar>
MatX<Scalar> far_block(const Discretization& disc, const FarCache<Scalar>& a,
                       const FarCache<Scalar>& b) {
  const int na = static_cast<int>(a.pts.cols());
  const int nb = static_cast<int>(b.pts.cols());
  MatX<Scalar> k(na, nb);
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < na; ++i)
      k(i, j) = kernel<Scalar>(disc.pde(), (a.pts.col(i) - b.pts.col(j)).norm());
  if constexpr (std::is_same_v<Scalar, double>) {
    return a.value.transpose() * (k * b.value).eval();
  } else {
    if (!disc.pde().is_vector()) return a.value.transpose() * (k * b.value).eval();
    const cplx kap = disc.pde().kappa;
    const cplx inv_k2 = 1.0 / (kap * kap);
    MatX<Scalar> blk = -inv_k2 * (a.dive.transpose() * (k * b.dive).eval());
    for (int d = 0; d < 3; ++d) blk += a.field[d].transpose() * (k * b.field[d]).eval();
    return blk;
  }
}

// singular pair via the regularized relative-coordinate rules
template <typename Scalar>
MatX<Scalar> singular_block(const Discretization& disc, int ea, int eb, const PairInfo& info,
                            int n) {
  const auto& rule = pair_rule(info.cls, n);
  const auto& ela = disc.element(ea);
  const auto& elb = disc.element(eb);
  const int nl = disc.local_count();
  const bool vec = disc.pde().is_vector();
  const double h4 = ela.h * ela.h * elb.h * elb.h;
  const cplx kap = disc.pde().kappa;
  const cplx inv_k2 = vec ? 1.0 / (kap * kap) : cplx(0);
  MatX<Scalar> blk = MatX<Scalar>::Zero(nl, nl);
  for (const auto& p : rule) {
    double ua = p.ua, va = p.va, ub = p.ub, vb = p.vb;
    info.map_a.apply(ua, va);
    info.map_b.apply(ub, vb);
    const auto fa = disc.geometry().frame(ela.patch, ela.origin.x() + ela.h * ua,
                                          ela.origin.y() + ela.h * va);
    const auto fb = disc.geometry().frame(elb.patch, elb.origin.x() + elb.h * ub,
                                          elb.origin.y() + elb.h * vb);
    const double r = std::max((fa.x - fb.x).norm(), kMinDist);
    const Scalar g = kernel<Scalar>(disc.pde(), r);
    const double w = p.w * fa.sqrt_g * fb.sqrt_g * h4;
    const auto sa = disc.sample_shapes(ea, ua, va);
    const auto sb = disc.sample_shapes(eb, ub, vb);
    if constexpr (std::is_same_v<Scalar, cplx>) {
      if (vec) {
        const Eigen::MatrixXd dots = sa.field.transpose() * sb.field;
        const Eigen::MatrixXd divs = sa.divergence * sb.divergence.transpose();
        blk += (g * w) * dots.cast<cplx>() - (g * w * inv_k2) * divs.cast<cplx>();
        continue;
      }
    }
    blk += (g * w) * (sa.value * sb.value.transpose()).template cast<Scalar>();
  }
  return blk;
}

// dense block of one element pair with the correct singularity handling;
// blocks for ea > eb singular pairs are the exact transposes of the
// ordered configuration, which keeps the Galerkin matrix symmetric
template <typename Scalar>
MatX<Scalar> pair_block(const Discretization& disc,
                        const std::vector<FarCache<Scalar>>& caches, int ea, int eb,
                        int nsing) {
  const auto info = disc.classify_pair(ea, eb);
  if (info.cls == PairClass::Far) return far_block(disc, caches[ea], caches[eb]);
  if (ea <= eb) return singular_block<Scalar>(disc, ea, eb, info, nsing);
  return singular_block<Scalar>(disc, eb, ea, disc.classify_pair(eb, ea), nsing)
      .transpose();
}

}  // namespace igabem::detail
