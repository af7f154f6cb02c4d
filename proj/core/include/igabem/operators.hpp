// Fundamental solutions, manufactured boundary data, and potential
// evaluation away from the surface. Time convention e^{+i omega t},
// so outgoing waves carry e^{-i kappa r}.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "igabem/spaces.hpp"

namespace igabem {

using cplx = std::complex<double>;

inline double laplace_g(double r) { return 1.0 / (4.0 * M_PI * r); }

inline cplx helmholtz_g(double r, cplx kappa) {
  return std::exp(cplx(0, -1) * kappa * r) / (4.0 * M_PI * r);
}

// radial derivative dG/dr of the Helmholtz kernel
inline cplx helmholtz_g_prime(double r, cplx kappa) {
  return helmholtz_g(r, kappa) * (-cplx(0, 1) * kappa - 1.0 / r);
}

inline double laplace_point_source(const Eigen::Vector3d& x, const Eigen::Vector3d& y0) {
  return laplace_g((x - y0).norm());
}

inline cplx helmholtz_point_source(const Eigen::Vector3d& x, const Eigen::Vector3d& y0,
                                   cplx kappa) {
  return helmholtz_g((x - y0).norm(), kappa);
}

// Field of an electric dipole with moment p at y0. Divergence free and a
// Maxwell solution away from y0.
Eigen::Vector3cd maxwell_dipole(const Eigen::Vector3d& x, const Eigen::Vector3d& y0,
                                const Eigen::Vector3d& p, cplx kappa);

// Single layer potentials of a solved density, evaluated by element-wise
// tensor Gauss quadrature of the given 1D order.
Eigen::VectorXd eval_potential(const Discretization& disc, const Eigen::VectorXd& density,
                               const std::vector<Eigen::Vector3d>& pts, int quad_order = 10);
Eigen::VectorXcd eval_potential(const Discretization& disc, const Eigen::VectorXcd& density,
                                const std::vector<Eigen::Vector3d>& pts, int quad_order = 10);

// Pointwise density evaluation at patch-global parameter coordinates.
double eval_density(const Discretization& disc, const Eigen::VectorXd& rho, int patch,
                    double u, double v);
cplx eval_density(const Discretization& disc, const Eigen::VectorXcd& rho, int patch,
                  double u, double v);
// lifted surface current of a Maxwell density
Eigen::Vector3cd eval_current(const Discretization& disc, const Eigen::VectorXcd& rho,
                              int patch, double u, double v);

// Maxwell electric field of the single layer ansatz,
// E = SL[j] + kappa^-2 grad SL[div j], one column per point.
Eigen::Matrix3Xcd eval_maxwell_potential(const Discretization& disc,
                                         const Eigen::VectorXcd& density,
                                         const std::vector<Eigen::Vector3d>& pts,
                                         int quad_order = 10);

}  // namespace igabem
