// Tensor Gauss rules and regularized quadrature point sets for the four
// element-pair singularity classes.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace igabem {

struct QuadRule1D {
  Eigen::VectorXd nodes;    // on [0,1]
  Eigen::VectorXd weights;  // summing to 1
};

// Gauss-Legendre rule with n points mapped to [0,1]; cached, 1 <= n <= 64.
const QuadRule1D& gauss_rule(int n);

enum class PairClass { Far, Vertex, Edge, Coincident };

// Symmetry of the unit square (element of D4): (u,v) -> coordinates with
// optional swap applied first, then flips.
struct SquareMap {
  bool swap = false, flip_u = false, flip_v = false;

  void apply(double& u, double& v) const {
    if (swap) std::swap(u, v);
    if (flip_u) u = 1.0 - u;
    if (flip_v) v = 1.0 - v;
  }
};

// The D4 map sending the bottom edge {v=0}, traversed by increasing u,
// onto the given edge traversed in the given direction.
SquareMap map_bottom_to_edge(int edge, bool reversed);
// A D4 map sending the corner (0,0) onto the given corner.
SquareMap map_origin_to_corner(int corner);

// One 4D quadrature point for an element pair: local coordinates in the
// two elements' canonical configuration plus a weight.
struct PairPoint {
  double ua, va, ub, vb, w;
};

// Regularized rule for a singular class in canonical configuration:
//   Coincident: both elements identical.
//   Edge: shared edge is {v=0} of both elements, u running identically.
//   Vertex: shared corner is (0,0) of both elements.
// Duffy-type subdomain decompositions with tensor Gauss of order n on
// each subdomain; cached per (class, n).
const std::vector<PairPoint>& pair_rule(PairClass cls, int n);

}  // namespace igabem
