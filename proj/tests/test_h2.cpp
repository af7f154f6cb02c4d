#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <set>

#include <omp.h>

#include "igabem/h2.hpp"
#include "igabem/shapes.hpp"

using namespace igabem;

namespace {
std::shared_ptr<const Geometry> sphere() {
  static auto g = std::make_shared<const Geometry>(make_sphere());
  return g;
}

// all leaf elements below a cluster node
void collect_leaves(const ClusterTree& t, int id, std::vector<int>& out) {
  if (t.is_leaf(id)) {
    out.push_back(t.leaf_element(id));
    return;
  }
  for (int k = 0; k < 4; ++k) collect_leaves(t, t.child(id, k), out);
}
}  // namespace

TEST_CASE("cluster tree bookkeeping") {
  Discretization d(sphere(), Pde::laplace(), 0, 1, 2);
  ClusterTree t(d);
  CHECK(t.depth() == 2);
  CHECK(t.nodes_per_patch() == 1 + 4 + 16);
  CHECK(t.node_count() == 6 * 21);
  for (int p = 0; p < 6; ++p) {
    const auto& r = t.node(t.root(p));
    CHECK(r.level == 0);
    CHECK(r.patch == p);
    // root box contains all child boxes
    for (int k = 0; k < 4; ++k)
      CHECK(r.box.contains(t.node(t.child(t.root(p), k)).box));
  }
  // leaves enumerate every element exactly once
  std::vector<int> leaves;
  for (int p = 0; p < 6; ++p) collect_leaves(t, t.root(p), leaves);
  std::set<int> uniq(leaves.begin(), leaves.end());
  CHECK(leaves.size() == static_cast<size_t>(d.element_count()));
  CHECK(uniq.size() == leaves.size());
  // leaf boxes coincide with element boxes
  for (int p = 0; p < 6; ++p)
    for (int sy = 0; sy < 4; ++sy)
      for (int sx = 0; sx < 4; ++sx) {
        const int id = t.node_id(p, 2, sx, sy);
        REQUIRE(t.is_leaf(id));
        const int e = t.leaf_element(id);
        CHECK(d.element(e).patch == p);
        CHECK(d.element(e).ix == sx);
        CHECK(d.element(e).iy == sy);
      }
}

TEST_CASE("admissibility") {
  ClusterNode a{0, 0, 0, 0, {}}, b{1, 0, 0, 0, {}};
  a.box = Eigen::AlignedBox3d(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1));
  b.box = a.box;
  CHECK_FALSE(admissible(a, b, 1.6));  // touching boxes never admissible
  b.box = Eigen::AlignedBox3d(Eigen::Vector3d(10, 0, 0), Eigen::Vector3d(11, 1, 1));
  CHECK(admissible(a, b, 1.6));  // diam sqrt(3), dist 9
  b.box = Eigen::AlignedBox3d(Eigen::Vector3d(1.5, 0, 0), Eigen::Vector3d(2.5, 1, 1));
  CHECK_FALSE(admissible(a, b, 1.6));  // dist 0.5 < diam/eta
  CHECK(admissible(a, b, 4.0));
}

TEST_CASE("block partition covers every element pair exactly once") {
  for (int l : {2, 3}) {
    Discretization d(sphere(), Pde::laplace(), 0, 1, l);
    H2Matrix<double> h(d, {.m = 4});
    const auto& t = h.tree();
    const long n = d.element_count();
    std::vector<int> cover(n * n, 0);
    for (auto [ea, eb] : h.nearfield_pairs()) ++cover[ea * n + eb];
    for (auto [ta, tb] : h.farfield_pairs()) {
      std::vector<int> la, lb;
      collect_leaves(t, ta, la);
      collect_leaves(t, tb, lb);
      for (int ea : la)
        for (int eb : lb) ++cover[ea * n + eb];
    }
    for (long i = 0; i < n * n; ++i) REQUIRE(cover[i] == 1);
  }
}

TEST_CASE("matvec agrees with the dense matrix") {
  for (int p : {0, 1}) {
    Discretization d(sphere(), Pde::laplace(), p, 1, 2);
    Eigen::MatrixXd a = assemble_dense(d);
    H2Matrix<double> h(d, {.m = 8});
    double worst = 0;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd x = Eigen::VectorXd::Random(d.dof_count());
      worst = std::max(worst, ((h * x) - a * x).norm() / (a * x).norm());
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("interpolation error decreases with m") {
  Discretization d(sphere(), Pde::laplace(), 0, 1, 3);
  Eigen::MatrixXd a = assemble_dense(d);
  Eigen::VectorXd x = Eigen::VectorXd::Random(d.dof_count());
  const Eigen::VectorXd ref = a * x;
  H2Matrix<double> h4(d, {.m = 4});
  H2Matrix<double> h8(d, {.m = 8});
  const double e4 = (h4 * x - ref).norm() / ref.norm();
  const double e8 = (h8 * x - ref).norm() / ref.norm();
  CHECK(e8 < 1e-6);
  CHECK(e4 > 100 * e8);
}

TEST_CASE("complex kinds compress too") {
  Discretization dh(sphere(), Pde::helmholtz(cplx(3, 0)), 1, 1, 2);
  Eigen::MatrixXcd a = assemble_dense_complex(dh);
  H2Matrix<cplx> h(dh, {.m = 8});
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(dh.dof_count());
  CHECK((h * x - a * x).norm() / (a * x).norm() < 1e-6);

  Discretization dm(sphere(), Pde::maxwell(cplx(3, 0)), 1, 1, 2);
  Eigen::MatrixXcd am = assemble_dense_complex(dm);
  H2Matrix<cplx> hm(dm, {.m = 8});
  Eigen::VectorXcd xm = Eigen::VectorXcd::Random(dm.dof_count());
  CHECK((hm * xm - am * xm).norm() / (am * xm).norm() < 1e-6);
}

TEST_CASE("matvec is linear") {
  Discretization d(sphere(), Pde::laplace(), 0, 1, 2);
  H2Matrix<double> h(d, {.m = 5});
  Eigen::VectorXd x = Eigen::VectorXd::Random(d.dof_count());
  Eigen::VectorXd y = Eigen::VectorXd::Random(d.dof_count());
  Eigen::VectorXd lhs = h * Eigen::VectorXd(3 * x - 2 * y);
  Eigen::VectorXd rhs = 3 * (h * x) - 2 * (h * y);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-12 * rhs.norm());
}

TEST_CASE("storage grows near-linearly with refinement") {
  std::vector<size_t> entries;
  for (int l : {2, 3, 4}) {
    Discretization d(sphere(), Pde::laplace(), 0, 1, l);
    H2Matrix<double> h(d, {.m = 4});
    auto st = h.storage_report();
    CHECK(st.nearfield_entries > 0);
    CHECK(st.farfield_entries > 0);
    CHECK(st.total_bytes >= (st.nearfield_entries + st.farfield_entries) * sizeof(double));
    entries.push_back(st.nearfield_entries + st.farfield_entries);
  }
  // dense growth would be 16x per level
  CHECK(static_cast<double>(entries[1]) / entries[0] < 6.5);
  CHECK(static_cast<double>(entries[2]) / entries[1] < 5.0);
}

TEST_CASE("matvec deterministic across thread counts") {
  Discretization d(sphere(), Pde::laplace(), 1, 1, 2);
  H2Matrix<double> h(d, {.m = 6});
  Eigen::VectorXd x = Eigen::VectorXd::Random(d.dof_count());
  omp_set_num_threads(1);
  Eigen::VectorXd y1 = h * x;
  omp_set_num_threads(8);
  Eigen::VectorXd y8 = h * x;
  CHECK((y1 - y8).lpNorm<Eigen::Infinity>() == 0.0);
}
