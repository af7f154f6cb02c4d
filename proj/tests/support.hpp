// Shared test helpers: adaptive 2D quadrature oracle for singular
// element-pair integrals over flat elements. Test-only; production code
// never integrates adaptively.
#pragma once

#include <cmath>
#include <functional>

namespace test_support {

inline double gauss2d(const std::function<double(double, double)>& f, double x0,
                      double y0, double x1, double y1, int n) {
  // hardcoded Gauss-Legendre nodes/weights on [0,1] for n in {4, 8}
  static const double n4[] = {0.06943184420297371, 0.33000947820757187,
                              0.6699905217924281, 0.9305681557970263};
  static const double w4[] = {0.17392742256872693, 0.32607257743127305,
                              0.32607257743127305, 0.17392742256872693};
  static const double n8[] = {0.01985507175123188, 0.10166676129318664,
                              0.2372337950418355,  0.40828267875217505,
                              0.591717321247825,   0.7627662049581645,
                              0.8983332387068134,  0.9801449282487681};
  static const double w8[] = {0.05061426814518813, 0.11119051722668723,
                              0.15685332293894364, 0.18134189168918097,
                              0.18134189168918097, 0.15685332293894364,
                              0.11119051722668723, 0.05061426814518813};
  const double* xs = n == 4 ? n4 : n8;
  const double* ws = n == 4 ? w4 : w8;
  const double hx = x1 - x0, hy = y1 - y0;
  double acc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc += ws[i] * ws[j] * f(x0 + hx * xs[i], y0 + hy * xs[j]);
  return acc * hx * hy;
}

inline double adapt2d_rec(const std::function<double(double, double)>& f, double x0,
                          double y0, double x1, double y1, double tol, int depth) {
  const double coarse = gauss2d(f, x0, y0, x1, y1, 4);
  const double fine = gauss2d(f, x0, y0, x1, y1, 8);
  if (std::abs(fine - coarse) <= tol || depth <= 0) return fine;
  const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
  return adapt2d_rec(f, x0, y0, xm, ym, tol / 2, depth - 1) +
         adapt2d_rec(f, xm, y0, x1, ym, tol / 2, depth - 1) +
         adapt2d_rec(f, x0, ym, xm, y1, tol / 2, depth - 1) +
         adapt2d_rec(f, xm, ym, x1, y1, tol / 2, depth - 1);
}

inline double adapt2d(const std::function<double(double, double)>& f, double x0,
                      double y0, double x1, double y1, double tol = 1e-10,
                      int depth = 24) {
  return adapt2d_rec(f, x0, y0, x1, y1, tol, depth);
}

// Exact reduction of the 4D Laplace-kernel integral over two flat unit
// squares (offset ox, oy apart) to a 2D correlation integral:
//   I = int tent(z1-ox) tent(z2-oy) / (4 pi |z|) dz.
inline double flat_pair_integral(double ox, double oy, double tol = 1e-10) {
  auto tent = [](double t) { return std::max(0.0, 1.0 - std::abs(t)); };
  auto f = [&](double z1, double z2) {
    const double r = std::hypot(z1, z2);
    if (r == 0) return 0.0;
    return tent(z1 - ox) * tent(z2 - oy) / (4.0 * M_PI * r);
  };
  // split at the kernel singularity z = 0 so panels only touch it at
  // corners, where Gauss nodes never sample
  double acc = 0;
  const double xs[3] = {ox - 1, 0, ox + 1};
  const double ys[3] = {oy - 1, 0, oy + 1};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double x0 = std::min(xs[i], xs[i + 1]), x1 = std::max(xs[i], xs[i + 1]);
      const double y0 = std::min(ys[j], ys[j + 1]), y1 = std::max(ys[j], ys[j + 1]);
      if (x1 > x0 && y1 > y0) acc += adapt2d(f, x0, y0, x1, y1, tol);
    }
  return acc;
}

}  // namespace test_support
