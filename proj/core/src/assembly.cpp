#include "igabem/assembly.hpp"

#include <algorithm>
#include <stdexcept>

#include "pair_integration.hpp"

namespace igabem {

namespace {

using detail::FarCache;
using detail::MatX;
using detail::VecX;

template <typename Scalar>
MatX<Scalar> assemble_impl(const Discretization& disc, const AssemblyOptions& opts) {
  const int ne = disc.element_count();
  const int nl = disc.local_count();
  const int nd = disc.dof_count();
  const int nfar = opts.resolved_far(disc.degree());
  const int nsing = opts.resolved_sing(disc.degree());

  std::vector<FarCache<Scalar>> caches(ne);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < ne; ++e) caches[e] = detail::make_far_cache<Scalar>(disc, e, nfar);

  // one test element's contribution, scattered over trial DOF columns
  auto row_block = [&](int ea) {
    MatX<Scalar> rows = MatX<Scalar>::Zero(nl, nd);
    for (int eb = 0; eb < ne; ++eb) {
      const MatX<Scalar> blk = detail::pair_block(disc, caches, ea, eb, nsing);
      for (int lb = 0; lb < nl; ++lb)
        rows.col(disc.local_to_global(eb, lb)) += disc.local_sign(eb, lb) * blk.col(lb);
    }
    return rows;
  };

  MatX<Scalar> a = MatX<Scalar>::Zero(nd, nd);
  constexpr int kChunk = 32;
  std::vector<MatX<Scalar>> buf(kChunk);
  for (int base = 0; base < ne; base += kChunk) {
    const int hi = std::min(base + kChunk, ne);
#pragma omp parallel for schedule(dynamic)
    for (int ea = base; ea < hi; ++ea) buf[ea - base] = row_block(ea);
    // fixed-order reduction keeps the result worker-count independent
    for (int ea = base; ea < hi; ++ea)
      for (int la = 0; la < nl; ++la)
        a.row(disc.local_to_global(ea, la)) +=
            disc.local_sign(ea, la) * buf[ea - base].row(la);
  }
  return a;
}

template <typename Scalar, typename Fun>
VecX<Scalar> rhs_impl(const Discretization& disc, const Fun& g, int quad_order) {
  const int ne = disc.element_count();
  const int nl = disc.local_count();
  const int n = quad_order > 0 ? quad_order : disc.degree() + 2;
  const auto& rule = gauss_rule(n);

  std::vector<VecX<Scalar>> loc(ne);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < ne; ++e) {
    const auto& el = disc.element(e);
    VecX<Scalar> b = VecX<Scalar>::Zero(nl);
    for (int bj = 0; bj < n; ++bj)
      for (int ai = 0; ai < n; ++ai) {
        const double ul = rule.nodes[ai], vl = rule.nodes[bj];
        const auto f = disc.geometry().frame(el.patch, el.origin.x() + el.h * ul,
                                             el.origin.y() + el.h * vl);
        const double w = rule.weights[ai] * rule.weights[bj] * f.sqrt_g * el.h * el.h;
        const auto s = disc.sample_shapes(e, ul, vl);
        if constexpr (std::is_same_v<typename std::invoke_result_t<Fun, Eigen::Vector3d>,
                                     Eigen::Vector3cd>) {
          // bilinear pairing, no conjugation: the system is complex-symmetric
          const Eigen::Vector3cd ef = g(f.x);
          for (int l = 0; l < nl; ++l)
            b[l] += w * ef.cwiseProduct(s.field.col(l).template cast<cplx>()).sum();
        } else {
          const Scalar gv = g(f.x);
          for (int l = 0; l < nl; ++l) b[l] += w * gv * s.value[l];
        }
      }
    loc[e] = std::move(b);
  }

  VecX<Scalar> out = VecX<Scalar>::Zero(disc.dof_count());
  for (int e = 0; e < ne; ++e)
    for (int l = 0; l < nl; ++l)
      out[disc.local_to_global(e, l)] += disc.local_sign(e, l) * loc[e][l];
  return out;
}

}  // namespace

Eigen::MatrixXd assemble_dense(const Discretization& disc, const AssemblyOptions& opts) {
  if (disc.pde().is_complex())
    throw std::invalid_argument("assemble_dense: complex kind, use assemble_dense_complex");
  return assemble_impl<double>(disc, opts);
}

Eigen::MatrixXcd assemble_dense_complex(const Discretization& disc,
                                        const AssemblyOptions& opts) {
  if (!disc.pde().is_complex())
    throw std::invalid_argument("assemble_dense_complex: Laplace kind, use assemble_dense");
  return assemble_impl<cplx>(disc, opts);
}

Eigen::VectorXd compute_rhs(const Discretization& disc,
                            const std::function<double(const Eigen::Vector3d&)>& g,
                            int quad_order) {
  if (disc.pde().is_complex())
    throw std::invalid_argument("compute_rhs: discretization is not real scalar");
  return rhs_impl<double>(disc, g, quad_order);
}

Eigen::VectorXcd compute_rhs_complex(const Discretization& disc,
                                     const std::function<cplx(const Eigen::Vector3d&)>& g,
                                     int quad_order) {
  if (disc.pde().is_vector() || !disc.pde().is_complex())
    throw std::invalid_argument("compute_rhs_complex: requires the Helmholtz kind");
  return rhs_impl<cplx>(disc, g, quad_order);
}

Eigen::VectorXcd compute_rhs_maxwell(
    const Discretization& disc,
    const std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>& e_field,
    int quad_order) {
  if (!disc.pde().is_vector())
    throw std::invalid_argument("compute_rhs_maxwell: requires the Maxwell kind");
  return rhs_impl<cplx>(disc, e_field, quad_order);
}

}  // namespace igabem
