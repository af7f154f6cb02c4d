// B-spline bases and NURBS patch mappings.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace igabem {

// Clamped knot vector on [0,1] for a degree-p B-spline basis.
// The first and last knot appear with multiplicity p+1.
struct KnotVector {
  std::vector<double> knots;
  int degree = 0;

  KnotVector() = default;
  KnotVector(std::vector<double> k, int p);

  // Number of basis functions, k = #knots - p - 1.
  int size() const { return static_cast<int>(knots.size()) - degree - 1; }

  // Index of the knot span containing x, i.e. the largest j with
  // knots[j] <= x and knots[j] < knots[j+1]. At x = 1 the last
  // nonempty span is returned (closed-on-the-right convention).
  int find_span(double x) const;

  bool operator==(const KnotVector&) const = default;
};

// Clamped knot vector with 2^L uniform elements; interior knots at i/2^L
// with multiplicity rep. Basis count is 2^L*rep + p + 1 - rep.
KnotVector make_uniform_knots(int p, int level, int rep);

// Knot vector without its first and last knot, used with degree p-1.
KnotVector truncate_knots(const KnotVector& kv);

// Values of the p+1 basis functions that may be nonzero at x.
// Returns the index of the first of them; out holds b_{first..first+p}(x).
int eval_basis(const KnotVector& kv, double x, Eigen::VectorXd& out);

// Derivatives (order 1 or 2) of the same p+1 local functions.
int eval_basis_deriv(const KnotVector& kv, double x, int order,
                     Eigen::VectorXd& out);

// Variants with a caller-chosen knot span (knots[span] <= x <= knots[span+1]),
// for evaluation pinned to a specific element at its boundary.
void eval_basis_span(const KnotVector& kv, int span, double x, Eigen::VectorXd& out);
void eval_basis_deriv_span(const KnotVector& kv, int span, double x, int order,
                           Eigen::VectorXd& out);

// Tensor-product NURBS surface patch. Control points are stored
// premultiplied by their weight (homogeneous form, as in the Octave
// NURBS coefs convention); weights must be strictly positive.
struct PatchSurface {
  KnotVector kv_u, kv_v;
  // ctrl_w(i + j*ku) = c_{i,j} * w_{i,j}, weight(i + j*ku) = w_{i,j},
  // i running over the first parametric direction.
  Eigen::Matrix3Xd ctrl_w;
  Eigen::VectorXd weight;

  int count_u() const { return kv_u.size(); }
  int count_v() const { return kv_v.size(); }
  Eigen::Vector3d point(int i, int j) const {
    const int idx = i + j * kv_u.size();
    return ctrl_w.col(idx) / weight[idx];
  }
  void validate() const;
};

// Point and first derivatives of the NURBS mapping at (u,v).
struct PatchJet {
  Eigen::Vector3d x;
  Eigen::Vector3d du;
  Eigen::Vector3d dv;
};

PatchJet eval_patch(const PatchSurface& s, double u, double v);

}  // namespace igabem
