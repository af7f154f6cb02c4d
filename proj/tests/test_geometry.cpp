#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "igabem/shapes.hpp"
#include "igabem/spaces.hpp"

using namespace igabem;

TEST_CASE("sphere topology") {
  auto g = make_sphere();
  CHECK(g.patch_count() == 6);
  CHECK(g.is_closed());
  CHECK(g.edge_idents().size() == 12);  // cube edges
  CHECK(g.check_matching().empty());
}

TEST_CASE("sphere area and frames") {
  auto g = make_sphere();
  CHECK(g.surface_area(12) == doctest::Approx(4 * M_PI).epsilon(1e-10));
  // outward normals: n . x > 0 on the unit sphere about the origin
  for (int p = 0; p < 6; ++p) {
    auto f = g.frame(p, 0.3, 0.8);
    CHECK(f.normal.dot(f.x) > 0);
    CHECK(f.sqrt_g == doctest::Approx(f.normal.norm()));
    CHECK((f.du.cross(f.dv) - f.normal).norm() < 1e-14);
  }

  auto g2 = make_sphere(3.0, {1, 2, 3});
  CHECK(g2.surface_area(12) == doctest::Approx(36 * M_PI).epsilon(1e-10));
  auto f = g2.frame(0, 0.5, 0.5);
  CHECK((f.x - Eigen::Vector3d(1, 2, 3)).norm() == doctest::Approx(3.0));
}

TEST_CASE("square patch") {
  auto g = make_square();
  CHECK(g.patch_count() == 1);
  CHECK_FALSE(g.is_closed());
  CHECK(g.surface_area(4) == doctest::Approx(1.0).epsilon(1e-14));
  auto f = g.frame(0, 0.25, 0.75);
  CHECK((f.x - Eigen::Vector3d(0.25, 0.75, 0.0)).norm() == 0.0);
  CHECK(f.sqrt_g == doctest::Approx(1.0));
}

TEST_CASE("geometry file round-trip is bit-exact") {
  auto g = make_sphere(1.7, {0.3, -0.2, 0.1});
  std::ostringstream first;
  write_geometry(g, first);
  std::istringstream in(first.str());
  auto g2 = read_geometry(in, "mem");
  std::ostringstream second;
  write_geometry(g2, second);
  CHECK(first.str() == second.str());

  CHECK(g2.patch_count() == g.patch_count());
  for (int p = 0; p < g.patch_count(); ++p) {
    auto fa = g.frame(p, 0.21, 0.68);
    auto fb = g2.frame(p, 0.21, 0.68);
    CHECK((fa.x - fb.x).norm() == 0.0);  // same numbers in, same evaluation
  }
}

TEST_CASE("file save/load") {
  auto g = make_sphere();
  const std::string path = "geom_roundtrip.dat";
  save_geometry(g, path);
  auto g2 = load_geometry(path);
  CHECK(g2.patch_count() == 6);
  CHECK(g2.is_closed());
  std::remove(path.c_str());
}

TEST_CASE("reader rejects malformed input") {
  std::istringstream empty("");
  CHECK_THROWS(read_geometry(empty, "empty"));
  std::istringstream garbage("this is not a geometry\n1 2 3\n");
  CHECK_THROWS(read_geometry(garbage, "garbage"));
  CHECK_THROWS(load_geometry("/nonexistent/path/geom.dat"));
}

TEST_CASE("matching detection flags broken identifications") {
  // scale the weight of an interior edge control point while keeping its
  // dehomogenized position: the edges still pair up (control polygons
  // agree) but the curves no longer coincide pointwise
  auto g = make_sphere();
  std::vector<PatchSurface> patches;
  for (int p = 0; p < 6; ++p) patches.push_back(g.patch(p));
  patches[0].ctrl_w.col(2) *= 1.5;  // (i=2, j=0), interior of edge v=0
  patches[0].weight[2] *= 1.5;
  auto broken = std::make_shared<const Geometry>(Geometry(std::move(patches)));
  auto viol = broken->check_matching();
  REQUIRE_FALSE(viol.empty());
  CHECK(viol.front().max_deviation > 1e-9);
  // discretizations refuse mismatched geometries
  CHECK_THROWS(Discretization(broken, Pde::laplace(), 1, 1, 1));
}

TEST_CASE("edge and corner parameter helpers") {
  double u, v;
  edge_point(0, 0.3, u, v);
  CHECK(u == 0.3);
  CHECK(v == 0.0);
  edge_point(1, 0.3, u, v);
  CHECK(u == 1.0);
  CHECK(v == 0.3);
  edge_point(2, 0.3, u, v);
  CHECK(v == 1.0);
  edge_point(3, 0.3, u, v);
  CHECK(u == 0.0);
  corner_point(3, u, v);
  CHECK(u == 1.0);
  CHECK(v == 1.0);
}

TEST_CASE("identified sphere edges coincide pointwise") {
  auto g = make_sphere();
  for (const auto& e : g.edge_idents()) {
    for (double t : {0.0, 0.25, 0.6, 1.0}) {
      double ua, va, ub, vb;
      edge_point(e.edge_a, t, ua, va);
      edge_point(e.edge_b, e.reversed ? 1.0 - t : t, ub, vb);
      auto fa = g.frame(e.patch_a, ua, va);
      auto fb = g.frame(e.patch_b, ub, vb);
      CHECK((fa.x - fb.x).norm() < 1e-12);
    }
  }
}
