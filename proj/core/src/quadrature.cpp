#include "igabem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace igabem {

namespace {

std::mutex gauss_mutex;
std::mutex pair_mutex;

QuadRule1D build_gauss(int n) {
  // Newton iteration on Legendre polynomials, nodes on (-1,1).
  QuadRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadRule1D& gauss_rule(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_rule: order out of range");
  static std::map<int, QuadRule1D> cache;
  std::lock_guard<std::mutex> lock(gauss_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss(n)).first;
  return it->second;
}

SquareMap map_bottom_to_edge(int edge, bool reversed) {
  // bottom edge: (t, 0). Targets: e0 (t,0), e1 (1,t), e2 (t,1), e3 (0,t).
  SquareMap m;
  switch (edge) {
    case 0: m = {false, reversed, false}; break;
    case 1: m = {true, true, reversed}; break;
    case 2: m = {false, reversed, true}; break;
    case 3: m = {true, false, reversed}; break;
    default: throw std::logic_error("map_bottom_to_edge: bad edge");
  }
  return m;
}

SquareMap map_origin_to_corner(int corner) {
  switch (corner) {
    case 0: return {false, false, false};
    case 1: return {false, true, false};
    case 2: return {false, false, true};
    case 3: return {false, true, true};
  }
  throw std::logic_error("map_origin_to_corner: bad corner");
}

namespace {

// Relative-coordinate Duffy decompositions. Each subdomain is integrated
// by a tensor Gauss rule in four variables g1..g4 in [0,1]; the
// transformations below remove the kernel singularity (the Jacobian
// factor cancels 1/|x-y|).

std::vector<PairPoint> build_coincident(int n) {
  const auto& g = gauss_rule(n);
  std::vector<PairPoint> pts;
  pts.reserve(8 * n * n * n * n);
  // sector: axis 0 -> |z1| dominant, axis 1 -> |z2| dominant
  for (int axis = 0; axis < 2; ++axis)
    for (int dir : {1, -1})
      for (int sgn : {1, -1})
        for (int i1 = 0; i1 < n; ++i1)
          for (int i2 = 0; i2 < n; ++i2)
            for (int i3 = 0; i3 < n; ++i3)
              for (int i4 = 0; i4 < n; ++i4) {
                const double t = g.nodes[i1], s = g.nodes[i2];
                double z1, z2;
                if (axis == 0) {
                  z1 = dir * t;
                  z2 = sgn * t * s;
                } else {
                  z1 = sgn * t * s;
                  z2 = dir * t;
                }
                const double lx = 1.0 - std::abs(z1), ly = 1.0 - std::abs(z2);
                const double x1 = std::max(0.0, -z1) + lx * g.nodes[i3];
                const double x2 = std::max(0.0, -z2) + ly * g.nodes[i4];
                const double w = g.weights[i1] * g.weights[i2] * g.weights[i3] *
                                 g.weights[i4] * t * lx * ly;
                pts.push_back({x1, x2, x1 + z1, x2 + z2, w});
              }
  return pts;
}

std::vector<PairPoint> build_edge(int n) {
  // canonical: both elements glued along their {v=0} edges, u aligned;
  // relative coordinates d = ub - ua, va, vb.
  const auto& g = gauss_rule(n);
  std::vector<PairPoint> pts;
  pts.reserve(6 * n * n * n * n);
  auto emit = [&](int kind, int sgn) {
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3)
          for (int i4 = 0; i4 < n; ++i4) {
            const double t = g.nodes[i1], a = g.nodes[i2], b = g.nodes[i3];
            double d, va, vb, jac;
            switch (kind) {
              case 0:  // va dominant
                va = t; vb = t * b; d = sgn * t * a;
                jac = t * t * (1.0 - t * a);
                break;
              case 1:  // vb dominant
                vb = t; va = t * b; d = sgn * t * a;
                jac = t * t * (1.0 - t * a);
                break;
              default:  // |d| dominant
                d = sgn * t; va = t * a; vb = t * b;
                jac = t * t * (1.0 - t);
                break;
            }
            const double ua = std::max(0.0, -d) + (1.0 - std::abs(d)) * g.nodes[i4];
            const double w =
                g.weights[i1] * g.weights[i2] * g.weights[i3] * g.weights[i4] * jac;
            pts.push_back({ua, va, ua + d, vb, w});
          }
  };
  for (int kind = 0; kind < 3; ++kind)
    for (int sgn : {1, -1}) emit(kind, sgn);
  return pts;
}

std::vector<PairPoint> build_vertex(int n) {
  // canonical: shared corner at (0,0) of both elements
  const auto& g = gauss_rule(n);
  std::vector<PairPoint> pts;
  pts.reserve(4 * n * n * n * n);
  for (int dom = 0; dom < 4; ++dom)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3)
          for (int i4 = 0; i4 < n; ++i4) {
            const double t = g.nodes[i1];
            double c[4];
            int j = 0;
            for (int k = 0; k < 4; ++k) {
              if (k == dom) {
                c[k] = t;
              } else {
                const double vals[3] = {g.nodes[i2], g.nodes[i3], g.nodes[i4]};
                c[k] = t * vals[j++];
              }
            }
            const double w = g.weights[i1] * g.weights[i2] * g.weights[i3] *
                             g.weights[i4] * t * t * t;
            pts.push_back({c[0], c[1], c[2], c[3], w});
          }
  return pts;
}

}  // namespace

const std::vector<PairPoint>& pair_rule(PairClass cls, int n) {
  if (cls == PairClass::Far)
    throw std::logic_error("pair_rule: Far pairs use tensor Gauss directly");
  static std::map<std::pair<int, int>, std::vector<PairPoint>> cache;
  std::lock_guard<std::mutex> lock(pair_mutex);
  const auto key = std::make_pair(static_cast<int>(cls), n);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<PairPoint> pts;
    switch (cls) {
      case PairClass::Vertex: pts = build_vertex(n); break;
      case PairClass::Edge: pts = build_edge(n); break;
      case PairClass::Coincident: pts = build_coincident(n); break;
      default: break;
    }
    it = cache.emplace(key, std::move(pts)).first;
  }
  return it->second;
}

}  // namespace igabem
