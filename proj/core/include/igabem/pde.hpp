// PDE kinds of the single layer formulations.
#pragma once

#include <complex>
#include <stdexcept>

namespace igabem {

struct Pde {
  enum class Kind { LaplaceSingle, HelmholtzSingle, MaxwellSingle };

  Kind kind = Kind::LaplaceSingle;
  // Non-resonant wavenumbers are a documented precondition for the
  // Helmholtz and Maxwell kinds; resonance is not detected.
  std::complex<double> kappa{0.0, 0.0};

  bool is_complex() const { return kind != Kind::LaplaceSingle; }
  bool is_vector() const { return kind == Kind::MaxwellSingle; }

  static Pde laplace() { return {Kind::LaplaceSingle, {0, 0}}; }
  static Pde helmholtz(std::complex<double> k) { return {Kind::HelmholtzSingle, k}; }
  static Pde maxwell(std::complex<double> k) {
    if (k == std::complex<double>(0, 0))
      throw std::invalid_argument("Pde: Maxwell requires a nonzero wavenumber");
    return {Kind::MaxwellSingle, k};
  }
};

}  // namespace igabem
