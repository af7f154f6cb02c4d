// Multi-patch boundary representations: import/export, topology,
// surface differential geometry.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "igabem/splines.hpp"

namespace igabem {

// Patch edges are numbered 0: v=0, 1: u=1, 2: v=1, 3: u=0.
// The edge parameter t runs along u (edges 0,2) or v (edges 1,3).
struct EdgeIdent {
  int patch_a, edge_a;
  int patch_b, edge_b;
  bool reversed;  // edge parameter of b runs opposite to a
};

// Patch corners numbered 0:(0,0), 1:(1,0), 2:(0,1), 3:(1,1).
struct VertexIdent {
  int patch_a, corner_a;
  int patch_b, corner_b;
};

struct SurfaceFrame {
  Eigen::Vector3d x, du, dv;
  Eigen::Vector3d normal;  // du x dv, unnormalized
  double sqrt_g;           // |normal|
};

struct MatchingViolation {
  int patch_a, patch_b;
  double max_deviation;
};

class Geometry {
 public:
  explicit Geometry(std::vector<PatchSurface> patches);

  int patch_count() const { return static_cast<int>(patches_.size()); }
  const PatchSurface& patch(int i) const { return patches_[i]; }
  const std::vector<EdgeIdent>& edge_idents() const { return edges_; }
  const std::vector<VertexIdent>& vertex_idents() const { return vertices_; }

  // Closed surface: every patch edge paired.
  bool is_closed() const;

  SurfaceFrame frame(int patch, double u, double v) const;

  // Samples 17 points along every identified edge pair and reports
  // parametrizations that fail to coincide under the affine edge map.
  std::vector<MatchingViolation> check_matching() const;

  double surface_area(int quad_order) const;

 private:
  void infer_topology();
  void validate_regularity() const;
  void validate_orientation() const;

  std::vector<PatchSurface> patches_;
  std::vector<EdgeIdent> edges_;
  std::vector<VertexIdent> vertices_;
};

Geometry load_geometry(const std::string& path);
Geometry read_geometry(std::istream& in, const std::string& name);
void save_geometry(const Geometry& g, const std::string& path);
void write_geometry(const Geometry& g, std::ostream& out);

// Point on a patch edge at edge parameter t.
void edge_point(int edge, double t, double& u, double& v);
// Corner parametric coordinates.
void corner_point(int corner, double& u, double& v);

}  // namespace igabem
