#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "igabem/operators.hpp"
#include "igabem/shapes.hpp"
#include "igabem/util.hpp"
#include "igabem/vtk.hpp"

using namespace igabem;

namespace {
struct VtkData {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> data;
};

VtkData parse_vtk(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  VtkData out;
  std::string tok;
  while (in >> tok) {
    if (tok == "POINTS") {
      int n;
      std::string type;
      in >> n >> type;
      out.points.resize(n);
      for (int i = 0; i < n; ++i) in >> out.points[i][0] >> out.points[i][1] >> out.points[i][2];
    } else if (tok == "LOOKUP_TABLE") {
      in >> tok;  // table name; values follow until EOF or next section
      double v;
      while (in >> v) out.data.push_back(v);
    }
  }
  return out;
}
}  // namespace

TEST_CASE("sphere grid") {
  auto grid = make_sphere_grid(6.0, 10);
  CHECK(grid.size() == 100);
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& x : grid) {
    CHECK(std::abs(x.norm() - 6.0) < 1e-13);
    centroid += x;
  }
  CHECK((centroid / 100).norm() < 1e-12);

  auto one = make_sphere_grid(1.0, 1);
  CHECK(one.size() == 1);
  CHECK(one[0].norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one[0][2] == doctest::Approx(0.0));  // equatorial latitude

  auto shifted = make_sphere_grid(2.0, 4, {1, 2, 3});
  for (const auto& x : shifted)
    CHECK((x - Eigen::Vector3d(1, 2, 3)).norm() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("log file contract") {
  const std::string path = "fmt_test.log";
  std::vector<LogRow> rows = {{0, 0.125, 0.5, 1.75}, {1, 1.0 / 3.0, 0.012345678901234567, 2.5}};
  write_log(rows, path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string c1, c2, c3, c4, extra;
  hs >> c1 >> c2 >> c3 >> c4;
  CHECK(c1 == "M");
  CHECK(c2 == "error");
  CHECK(c3 == "error_rho");
  CHECK(c4 == "t_mat");
  CHECK_FALSE(static_cast<bool>(hs >> extra));

  int lines = 0;
  int m;
  double e, er, t;
  while (in >> m >> e >> er >> t) {
    CHECK(m == rows[lines].m);
    CHECK(e == doctest::Approx(rows[lines].error).epsilon(1e-15));
    CHECK(er == doctest::Approx(rows[lines].error_rho).epsilon(1e-15));
    CHECK(t == doctest::Approx(rows[lines].t_mat).epsilon(1e-15));
    ++lines;
  }
  CHECK(lines == 2);

  // 16 significant digits survive the round trip for a full-precision value
  std::ifstream in2(path);
  std::string line;
  std::getline(in2, line);
  std::getline(in2, line);
  std::getline(in2, line);
  std::istringstream ls(line);
  ls >> m >> e >> er >> t;
  CHECK(er == doctest::Approx(0.012345678901234567).epsilon(1e-15));
  std::remove(path.c_str());
}

TEST_CASE("potential csv") {
  const std::string path = "fmt_test.csv";
  std::vector<Eigen::Vector3d> pts = {{1, 2, 3}, {-1, 0, 0.5}};
  Eigen::MatrixXcd vals(3, 2);
  vals << cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(7, 8), cplx(9, 10), cplx(11, 12);
  write_potential_csv(pts, vals, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  for (int j = 0; j < 2; ++j) {
    double x, y, z;
    in >> x >> y >> z;
    CHECK((Eigen::Vector3d(x, y, z) - pts[j]).norm() == 0.0);
    for (int c = 0; c < 3; ++c) {
      double re, im;
      in >> re >> im;
      CHECK(re == vals(c, j).real());
      CHECK(im == vals(c, j).imag());
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("geometry vtk: sphere vertices on the sphere, points re-read bit-exactly") {
  auto g = make_sphere();
  const std::string path = "fmt_sphere.vtk";
  write_geometry_vtk(g, 5, path);
  auto v = parse_vtk(path);
  CHECK(v.points.size() == 6u * 6 * 6);
  for (const auto& x : v.points) CHECK(std::abs(x.norm() - 1.0) < 1e-10);
  // bit-exact re-read: writing the parsed points again yields the same file
  write_geometry_vtk(g, 5, path + "2");
  auto v2 = parse_vtk(path + "2");
  for (size_t i = 0; i < v.points.size(); ++i) CHECK((v.points[i] - v2.points[i]).norm() == 0.0);
  std::remove(path.c_str());
  std::remove((path + "2").c_str());
}

TEST_CASE("density vtk: zero density gives zero point data") {
  auto geo = std::make_shared<const Geometry>(make_sphere());
  Discretization d(geo, Pde::laplace(), 1, 1, 1);
  const std::string path = "fmt_density.vtk";
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(d.dof_count());
  write_density_vtk(d, zero, path);
  auto v = parse_vtk(path);
  // subdivisions 2^L (P+1) = 4 per direction per patch
  CHECK(v.points.size() == 6u * 5 * 5);
  CHECK(v.data.size() == v.points.size());
  for (double val : v.data) CHECK(val == 0.0);

  // complex variant writes magnitudes
  Discretization dh(geo, Pde::helmholtz(cplx(3, 0)), 1, 1, 1);
  Eigen::VectorXcd rho = Eigen::VectorXcd::Constant(dh.dof_count(), cplx(0, -2));
  write_density_vtk(dh, rho, path);
  auto vc = parse_vtk(path);
  for (double val : vc.data) CHECK(val == doctest::Approx(2.0).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("vtk header is legacy ascii unstructured grid") {
  auto g = make_square();
  const std::string path = "fmt_header.vtk";
  write_geometry_vtk(g, 2, path);
  std::ifstream in(path);
  std::string l1, l2, l3, l4;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  std::getline(in, l4);
  CHECK(l1.substr(0, 22) == "# vtk DataFile Version");
  CHECK(l3 == "ASCII");
  CHECK(l4 == "DATASET UNSTRUCTURED_GRID");
  std::remove(path.c_str());
}

TEST_CASE("io errors carry the path") {
  auto g = make_square();
  CHECK_THROWS_WITH_AS(write_geometry_vtk(g, 2, "/nonexistent/dir/x.vtk"),
                       doctest::Contains("/nonexistent/dir/x.vtk"),
                       std::runtime_error);
  CHECK_THROWS(write_log({}, "/nonexistent/dir/x.log"));
}
