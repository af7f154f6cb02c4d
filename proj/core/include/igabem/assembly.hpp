// Dense Galerkin assembly and load vectors. The dense path is the
// permanent oracle for the compressed operators and stays usable up to
// a few thousand DOFs.
#pragma once

#include <functional>

#include "igabem/operators.hpp"
#include "igabem/spaces.hpp"

namespace igabem {

struct AssemblyOptions {
  // 1D Gauss orders; 0 means the default P+2 (far) / P+3 (singular)
  int far_order = 0;
  int sing_order = 0;

  int resolved_far(int degree) const { return far_order > 0 ? far_order : degree + 2; }
  int resolved_sing(int degree) const { return sing_order > 0 ? sing_order : degree + 3; }
};

// Galerkin matrix of the single layer bilinear form. The real variant
// requires a Laplace discretization, the complex variant Helmholtz or
// Maxwell (EFIE form: kernel-weighted field dot minus kappa^-2 div-div).
Eigen::MatrixXd assemble_dense(const Discretization& disc, const AssemblyOptions& opts = {});
Eigen::MatrixXcd assemble_dense_complex(const Discretization& disc,
                                        const AssemblyOptions& opts = {});

// Load vectors b_i = <g, phi_i>_Gamma (scalar kinds) respectively
// b_i = <E, j_i>_Gamma (Maxwell; the pairing with tangential test fields
// extracts the rotated trace data of the incident field E).
Eigen::VectorXd compute_rhs(const Discretization& disc,
                            const std::function<double(const Eigen::Vector3d&)>& g,
                            int quad_order = 0);
Eigen::VectorXcd compute_rhs_complex(const Discretization& disc,
                                     const std::function<cplx(const Eigen::Vector3d&)>& g,
                                     int quad_order = 0);
Eigen::VectorXcd compute_rhs_maxwell(
    const Discretization& disc,
    const std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>& e_field,
    int quad_order = 0);

template <typename MatT, typename VecT>
double residual_check(const MatT& a, const VecT& x, const VecT& b) {
  const double nb = b.norm();
  const double r = (a * x - b).norm();
  return nb > 0 ? r / nb : r;
}

}  // namespace igabem
