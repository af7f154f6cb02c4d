#include "igabem/shapes.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace igabem {

PatchSurface make_rectangle_patch(const Eigen::Vector3d& origin,
                                  const Eigen::Vector3d& side_u,
                                  const Eigen::Vector3d& side_v, int p) {
  PatchSurface s;
  s.kv_u = make_uniform_knots(p, 0, 1);
  s.kv_v = make_uniform_knots(p, 0, 1);
  const int k = p + 1;
  s.ctrl_w.resize(3, k * k);
  s.weight = Eigen::VectorXd::Ones(k * k);
  // Greville-uniform layout reproduces the bilinear map exactly.
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) {
      const double gu = p > 0 ? double(i) / p : 0.5;
      const double gv = p > 0 ? double(j) / p : 0.5;
      s.ctrl_w.col(i + j * k) = origin + side_u * gu + side_v * gv;
    }
  return s;
}

Geometry make_square() {
  return Geometry({make_rectangle_patch({0, 0, 0}, {1, 0, 0}, {0, 1, 0})});
}

namespace {

// Bivariate polynomial in the power basis, coef(i,j) * u^i v^j.
using Poly2 = Eigen::MatrixXd;

Poly2 pmul(const Poly2& a, const Poly2& b) {
  Poly2 c = Poly2::Zero(a.rows() + b.rows() - 1, a.cols() + b.cols() - 1);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) c(i + k, j + l) += a(i, j) * b(k, l);
  return c;
}

Poly2 padd(const Poly2& a, const Poly2& b) {
  Poly2 c = Poly2::Zero(std::max(a.rows(), b.rows()), std::max(a.cols(), b.cols()));
  c.topLeftCorner(a.rows(), a.cols()) = a;
  c.topLeftCorner(b.rows(), b.cols()) += b;
  return c;
}

double binom(int n, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Power-basis coefficients (degree n) -> Bernstein coefficients.
Eigen::VectorXd power_to_bernstein(const Eigen::VectorXd& a, int n) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= j && k < a.size(); ++k)
      c[j] += a[k] * binom(j, k) / binom(n, k);
  return c;
}

// Quadratic Bezier in homogeneous R^3 as three power-basis Poly2 rows
// depending on a single variable; var 0 = u, 1 = v.
struct HCurve {
  std::array<Eigen::Vector3d, 3> b;  // Bezier control values
};

// Canonical rational quadratic for the great-circle arc from A to B
// (unit vectors), in homogeneous R^4 (x,y,z,w). Symmetric under reversal.
std::array<Eigen::Vector4d, 3> arc_h(const Eigen::Vector3d& A, const Eigen::Vector3d& B) {
  const double c = A.dot(B);
  const double w = std::sqrt((1.0 + c) / 2.0);
  const Eigen::Vector3d M = (A + B) / (1.0 + c);
  return {Eigen::Vector4d(A.x(), A.y(), A.z(), 1.0),
          Eigen::Vector4d(w * M.x(), w * M.y(), w * M.z(), w),
          Eigen::Vector4d(B.x(), B.y(), B.z(), 1.0)};
}

}  // namespace

Geometry make_sphere(double radius, const Eigen::Vector3d& center) {
  if (radius <= 0) throw std::invalid_argument("make_sphere: radius must be positive");
  const double s = 1.0 / std::sqrt(3.0);

  // Face corner layout: C00, C10, C01, C11 (unit vectors), chosen so that
  // du x dv points outward. a = outward face axis.
  struct Face {
    Eigen::Vector3d a;
    std::array<Eigen::Vector3d, 4> c;
  };
  const std::array<Face, 6> faces = {{
      {{1, 0, 0}, {{{1, -1, -1}, {1, 1, -1}, {1, -1, 1}, {1, 1, 1}}}},
      {{-1, 0, 0}, {{{-1, -1, -1}, {-1, -1, 1}, {-1, 1, -1}, {-1, 1, 1}}}},
      {{0, 1, 0}, {{{-1, 1, -1}, {-1, 1, 1}, {1, 1, -1}, {1, 1, 1}}}},
      {{0, -1, 0}, {{{-1, -1, -1}, {1, -1, -1}, {-1, -1, 1}, {1, -1, 1}}}},
      {{0, 0, 1}, {{{-1, -1, 1}, {1, -1, 1}, {-1, 1, 1}, {1, 1, 1}}}},
      {{0, 0, -1}, {{{-1, -1, -1}, {-1, 1, -1}, {1, -1, -1}, {1, 1, -1}}}},
  }};

  std::vector<PatchSurface> patches;
  for (const auto& face : faces) {
    const Eigen::Vector3d a = face.a;
    // orthonormal in-plane basis for the stereographic chart from pole -a
    const Eigen::Vector3d ref =
        std::abs(a.x()) < 0.9 ? Eigen::Vector3d(1, 0, 0) : Eigen::Vector3d(0, 1, 0);
    const Eigen::Vector3d e1 = a.cross(ref).normalized();
    const Eigen::Vector3d e2 = a.cross(e1);

    std::array<Eigen::Vector3d, 4> C;
    for (int i = 0; i < 4; ++i) C[i] = face.c[i] * s;

    // project a homogeneous sphere point to homogeneous plane coordinates
    auto project = [&](const Eigen::Vector4d& h) {
      const Eigen::Vector3d x = h.head<3>();
      return Eigen::Vector3d(e1.dot(x), e2.dot(x), h[3] + a.dot(x));
    };
    auto arc2d = [&](const Eigen::Vector3d& A, const Eigen::Vector3d& B) {
      const auto h = arc_h(A, B);
      return std::array<Eigen::Vector3d, 3>{project(h[0]), project(h[1]), project(h[2])};
    };

    const auto bottom = arc2d(C[0], C[1]);  // v = 0, runs along u
    const auto top = arc2d(C[2], C[3]);     // v = 1
    const auto left = arc2d(C[0], C[2]);    // u = 0, runs along v
    const auto right = arc2d(C[1], C[3]);   // u = 1

    // Bilinearly blended Coons patch in homogeneous plane coordinates,
    // degree (2,2); boundaries reproduce the four arcs exactly.
    std::array<Poly2, 3> P;
    const Poly2 one = Poly2::Ones(1, 1);
    Poly2 u(2, 1), v(1, 2);
    u << 0, 1;
    v << 0, 1;
    const Poly2 mu = padd(one, -u), mv = padd(one, -v);
    // Bernstein quadratics in power basis
    auto bern2 = [&](const Poly2& t, int k) {
      const Poly2 mt = padd(one, -t);
      if (k == 0) return pmul(mt, mt);
      if (k == 1) return pmul(pmul(one * 2.0, t), mt);
      return pmul(t, t);
    };
    for (int c = 0; c < 3; ++c) {
      Poly2 acc = Poly2::Zero(1, 1);
      for (int k = 0; k < 3; ++k) {
        acc = padd(acc, pmul(mv, bern2(u, k)) * bottom[k][c]);
        acc = padd(acc, pmul(v, bern2(u, k)) * top[k][c]);
        acc = padd(acc, pmul(mu, bern2(v, k)) * left[k][c]);
        acc = padd(acc, pmul(u, bern2(v, k)) * right[k][c]);
      }
      // subtract the bilinear corner blend
      const Eigen::Vector3d P00 = bottom[0], P10 = bottom[2], P01 = top[0], P11 = top[2];
      acc = padd(acc, pmul(mu, mv) * -P00[c]);
      acc = padd(acc, pmul(u, mv) * -P10[c]);
      acc = padd(acc, pmul(mu, v) * -P01[c]);
      acc = padd(acc, pmul(u, v) * -P11[c]);
      P[c] = acc;
    }

    // Lift through the inverse stereographic map: (xi, eta, om) ->
    // homogeneous R^4 of the sphere point, quadratic in the plane coords.
    const Poly2 xi = P[0], eta = P[1], om = P[2];
    const Poly2 xi2 = pmul(xi, xi), eta2 = pmul(eta, eta), om2 = pmul(om, om);
    const Poly2 radial = padd(om2, padd(pmul(xi2, -one), pmul(eta2, -one)));
    std::array<Poly2, 4> H;
    for (int c = 0; c < 3; ++c) {
      Poly2 acc = pmul(pmul(xi, om) * 2.0, one) * e1[c];
      acc = padd(acc, pmul(eta, om) * (2.0 * e2[c]));
      acc = padd(acc, radial * a[c]);
      H[c] = acc;
    }
    H[3] = padd(om2, padd(xi2, eta2));

    // Convert the degree-(4,4) power-basis patch to a Bernstein net.
    PatchSurface patch;
    patch.kv_u = make_uniform_knots(4, 0, 1);
    patch.kv_v = make_uniform_knots(4, 0, 1);
    Eigen::Matrix4Xd net(4, 25);
    for (int c = 0; c < 4; ++c) {
      Poly2 full = Poly2::Zero(5, 5);
      full.topLeftCorner(H[c].rows(), H[c].cols()) = H[c];
      // separate 1D conversions per direction
      Eigen::MatrixXd tmp(5, 5);
      for (int j = 0; j < 5; ++j) tmp.col(j) = power_to_bernstein(full.col(j), 4);
      for (int i = 0; i < 5; ++i)
        full.row(i) = power_to_bernstein(tmp.row(i).transpose(), 4).transpose();
      for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 5; ++i) net(c, i + 5 * j) = full(i, j);
    }
    patch.weight = net.row(3).transpose();
    if ((patch.weight.array() <= 0.0).any())
      throw std::logic_error("make_sphere: nonpositive weight in lifted patch");
    // scale and translate the Cartesian part; weights are unaffected
    patch.ctrl_w.resize(3, 25);
    for (int i = 0; i < 25; ++i)
      patch.ctrl_w.col(i) = radius * net.col(i).head<3>() + center * net(3, i);
    patches.push_back(std::move(patch));
  }
  return Geometry(std::move(patches));
}

}  // namespace igabem
