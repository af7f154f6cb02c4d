// H2-matrix compression on the reference element grids: per-patch
// quadtrees, tensor-Chebyshev interpolation of the kernel on admissible
// cluster pairs, dense nearfield blocks, and a matrix-free matvec.
#pragma once

#include "igabem/assembly.hpp"
#include "igabem/spaces.hpp"

namespace igabem {

struct H2Options {
  int m = 8;         // interpolation points per parametric direction
  double eta = 1.6;  // admissibility: max(diam) <= eta * dist of 3D boxes
  AssemblyOptions quad;
};

struct ClusterNode {
  int patch, level;
  int sx, sy;  // square index within the level's 2^level grid
  Eigen::AlignedBox3d box;
};

// Per-patch quadtrees over the parametric unit square down to the
// discretization level; leaves are elements.
class ClusterTree {
 public:
  explicit ClusterTree(const Discretization& disc);

  int depth() const { return depth_; }  // leaf level
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int nodes_per_patch() const { return npp_; }
  const ClusterNode& node(int id) const { return nodes_[id]; }
  int node_id(int patch, int level, int sx, int sy) const {
    return patch * npp_ + level_offset_[level] + sx + (1 << level) * sy;
  }
  int root(int patch) const { return patch * npp_; }
  // child k of a non-leaf node; k = dx + 2*dy
  int child(int id, int k) const;
  bool is_leaf(int id) const { return nodes_[id].level == depth_; }
  int leaf_element(int id) const;  // element index of a leaf node

 private:
  const Discretization* disc_;
  int depth_, npp_;
  std::vector<int> level_offset_;
  std::vector<ClusterNode> nodes_;
};

bool admissible(const ClusterNode& a, const ClusterNode& b, double eta);

struct H2Storage {
  size_t nearfield_entries = 0;
  size_t farfield_entries = 0;
  size_t total_bytes = 0;
};

template <typename Scalar>
class H2Matrix {
 public:
  H2Matrix(const Discretization& disc, H2Options opts = {});

  int rows() const { return dim_; }
  int cols() const { return dim_; }
  const ClusterTree& tree() const { return tree_; }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply(
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) const;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> operator*(
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) const {
    return apply(x);
  }

  H2Storage storage_report() const;

  // block partition introspection (element pairs / node pairs)
  std::vector<std::pair<int, int>> nearfield_pairs() const;
  std::vector<std::pair<int, int>> farfield_pairs() const;

 private:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct NearBlock {
    int ea, eb;
    Mat blk;
  };
  struct FarPair {
    int ta, tb;  // node ids
    Mat coupling;  // m^2 x m^2 kernel samples
  };

  void build_moments();
  void build_blocks();

  const Discretization* disc_;
  H2Options opts_;
  ClusterTree tree_;
  int dim_, nch_;  // nch_: interpolation chains (1 scalar, 4 Maxwell)

  Mat tl_, tr_;                        // 1D child transfer matrices
  std::vector<Mat> moments_;           // per element, nch_*m^2 x n_local
  std::vector<NearBlock> near_;        // sorted by (ea, eb)
  std::vector<int> near_row_start_;    // group starts per test element
  std::vector<FarPair> far_;           // sorted by (ta, tb)
  std::vector<int> far_row_start_;     // group starts per target node
};

extern template class H2Matrix<double>;
extern template class H2Matrix<cplx>;

}  // namespace igabem
