// Conforming multi-patch boundary element spaces with global DOF
// numbering: discontinuous scalar spaces for the scalar kinds, the
// div-conforming Piola-lifted vector space for Maxwell.
#pragma once

#include <memory>
#include <vector>

#include "igabem/geometry.hpp"
#include "igabem/pde.hpp"
#include "igabem/quadrature.hpp"

namespace igabem {

struct Element {
  int patch;
  int ix, iy;        // grid position, 0 <= ix,iy < 2^L
  double h;          // parametric side length 2^-L
  Eigen::Vector2d origin;
  Eigen::AlignedBox3d box;  // 3D bounding box of the image
};

// Shape values of all locally supported basis functions at one point.
// Scalar spaces: value only. Vector space: Piola-lifted field and its
// surface divergence.
struct ShapeSample {
  Eigen::VectorXd value;              // scalar spaces
  Eigen::Matrix3Xd field;             // vector space, lifted
  Eigen::VectorXd divergence;         // vector space, div_Gamma
};

struct PairInfo {
  PairClass cls = PairClass::Far;
  SquareMap map_a, map_b;  // canonical-to-local element coordinate maps
};

class Discretization {
 public:
  Discretization(std::shared_ptr<const Geometry> g, const Pde& pde, int degree,
                 int rep, int level);

  const Geometry& geometry() const { return *geom_; }
  const Pde& pde() const { return pde_; }
  int degree() const { return degree_; }
  int repetition() const { return rep_; }
  int level() const { return level_; }

  int dof_count() const { return n_dofs_; }
  int element_count() const { return static_cast<int>(elements_.size()); }
  const Element& element(int e) const { return elements_[e]; }
  int elements_per_patch() const { return epp_; }
  // elements of one patch in lexicographic order: e = patch*epp + ix + 2^L*iy
  int element_index(int patch, int ix, int iy) const {
    return patch * epp_ + ix + (1 << level_) * iy;
  }

  // local basis functions supported on an element
  int local_count() const { return n_local_; }
  // global index and orientation sign of local function l on element e
  int local_to_global(int e, int l) const { return loc2glob_[e][l].first; }
  double local_sign(int e, int l) const { return loc2glob_[e][l].second; }

  // Shape functions at a point given in element-local coordinates in [0,1]^2.
  ShapeSample sample_shapes(int e, double u_loc, double v_loc) const;

  // Singularity classification of an element pair, including adjacency
  // across glued patch boundaries.
  PairInfo classify_pair(int ea, int eb) const;

 private:
  void build_scalar();
  void build_maxwell();
  void build_elements();

  std::shared_ptr<const Geometry> geom_;
  Pde pde_;
  int degree_, rep_, level_;
  int epp_, n_dofs_ = 0, n_local_ = 0;

  // scalar space: per-direction knot vector (same in u and v, same for
  // all patches) and per-patch dof grid dimension
  KnotVector scalar_kv_;
  int scalar_k_ = 0;

  // vector space knot vectors: degree P along the flow direction,
  // degree P-1 across
  KnotVector vec_kv_p_, vec_kv_q_;
  int vec_kp_ = 0, vec_kq_ = 0;

  std::vector<Element> elements_;
  std::vector<std::vector<std::pair<int, double>>> loc2glob_;

  // patch corner adjacency for Vertex classification: for every pair of
  // distinct patches sharing geometry, cached edge/corner relations
  struct CrossEdge {
    int edge_a, edge_b;
    bool reversed;
  };
  // cross_edges_[a][b] holds shared edges between patches a and b
  std::vector<std::vector<std::vector<CrossEdge>>> cross_edges_;
  struct CrossCorner {
    int corner_a, corner_b;
  };
  std::vector<std::vector<std::vector<CrossCorner>>> cross_corners_;
};

}  // namespace igabem
