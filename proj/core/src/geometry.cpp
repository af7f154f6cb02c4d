#include "igabem/geometry.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "igabem/quadrature.hpp"

namespace igabem {

namespace {

constexpr double kMatchTol = 1e-9;

// Control polygon of a patch edge (unweighted points), ordered by the
// edge parameter.
Eigen::Matrix3Xd edge_polygon(const PatchSurface& s, int edge) {
  const int ku = s.count_u(), kv = s.count_v();
  Eigen::Matrix3Xd poly;
  auto col = [&](int i, int j) { return s.point(i, j); };
  switch (edge) {
    case 0:
      poly.resize(3, ku);
      for (int i = 0; i < ku; ++i) poly.col(i) = col(i, 0);
      break;
    case 1:
      poly.resize(3, kv);
      for (int j = 0; j < kv; ++j) poly.col(j) = col(ku - 1, j);
      break;
    case 2:
      poly.resize(3, ku);
      for (int i = 0; i < ku; ++i) poly.col(i) = col(i, kv - 1);
      break;
    case 3:
      poly.resize(3, kv);
      for (int j = 0; j < kv; ++j) poly.col(j) = col(0, j);
      break;
    default:
      throw std::logic_error("edge_polygon: bad edge");
  }
  return poly;
}

Eigen::Vector3d corner_ctrl(const PatchSurface& s, int corner) {
  const int i = (corner == 1 || corner == 3) ? s.count_u() - 1 : 0;
  const int j = (corner >= 2) ? s.count_v() - 1 : 0;
  return s.point(i, j);
}

bool polys_match(const Eigen::Matrix3Xd& a, const Eigen::Matrix3Xd& b, bool& reversed) {
  if (a.cols() != b.cols()) return false;
  const int n = static_cast<int>(a.cols());
  double fwd = 0, rev = 0;
  for (int i = 0; i < n; ++i) {
    fwd = std::max(fwd, (a.col(i) - b.col(i)).norm());
    rev = std::max(rev, (a.col(i) - b.col(n - 1 - i)).norm());
  }
  if (fwd <= kMatchTol) {
    reversed = false;
    return true;
  }
  if (rev <= kMatchTol) {
    reversed = true;
    return true;
  }
  return false;
}

}  // namespace

void edge_point(int edge, double t, double& u, double& v) {
  switch (edge) {
    case 0: u = t; v = 0; break;
    case 1: u = 1; v = t; break;
    case 2: u = t; v = 1; break;
    case 3: u = 0; v = t; break;
    default: throw std::logic_error("edge_point: bad edge");
  }
}

void corner_point(int corner, double& u, double& v) {
  u = (corner == 1 || corner == 3) ? 1.0 : 0.0;
  v = (corner >= 2) ? 1.0 : 0.0;
}

Geometry::Geometry(std::vector<PatchSurface> patches) : patches_(std::move(patches)) {
  if (patches_.empty()) throw std::invalid_argument("Geometry: no patches");
  for (const auto& p : patches_) p.validate();
  infer_topology();
  validate_regularity();
  validate_orientation();
}

void Geometry::infer_topology() {
  const int m = patch_count();
  std::vector<int> paired(4 * m, 0);
  for (int a = 0; a < m; ++a) {
    for (int ea = 0; ea < 4; ++ea) {
      const auto pa = edge_polygon(patches_[a], ea);
      for (int b = a; b < m; ++b) {
        for (int eb = (b == a ? ea + 1 : 0); eb < 4; ++eb) {
          bool rev = false;
          if (polys_match(pa, edge_polygon(patches_[b], eb), rev)) {
            edges_.push_back({a, ea, b, eb, rev});
            if (++paired[4 * a + ea] > 1 || ++paired[4 * b + eb] > 1)
              throw std::runtime_error("Geometry: three or more coincident edges");
          }
        }
      }
    }
  }
  // vertex identifications (corners coinciding without a shared edge
  // between the same two patches count as well; record all pairs)
  for (int a = 0; a < m; ++a)
    for (int ca = 0; ca < 4; ++ca) {
      const Eigen::Vector3d xa = corner_ctrl(patches_[a], ca);
      for (int b = a; b < m; ++b)
        for (int cb = (b == a ? ca + 1 : 0); cb < 4; ++cb)
          if ((xa - corner_ctrl(patches_[b], cb)).norm() <= kMatchTol)
            vertices_.push_back({a, ca, b, cb});
    }
}

void Geometry::validate_regularity() const {
  for (int p = 0; p < patch_count(); ++p)
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const auto f = frame(p, i / 4.0, j / 4.0);
        if (f.sqrt_g < 1e-12) {
          std::ostringstream os;
          os << "Geometry: degenerate parametrization on patch " << p << " at ("
             << i / 4.0 << ", " << j / 4.0 << ")";
          throw std::runtime_error(os.str());
        }
      }
}

void Geometry::validate_orientation() const {
  if (!is_closed()) return;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  int n = 0;
  for (int p = 0; p < patch_count(); ++p)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        centroid += frame(p, 0.25 + 0.25 * i, 0.25 + 0.25 * j).x;
        ++n;
      }
  centroid /= n;
  for (int p = 0; p < patch_count(); ++p)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const auto f = frame(p, 0.25 + 0.25 * i, 0.25 + 0.25 * j);
        if (f.normal.dot(f.x - centroid) <= 0.0) {
          std::ostringstream os;
          os << "Geometry: normal of patch " << p << " is not outward pointing";
          throw std::runtime_error(os.str());
        }
      }
}

bool Geometry::is_closed() const {
  return static_cast<int>(edges_.size()) == 2 * patch_count();
}

SurfaceFrame Geometry::frame(int patch, double u, double v) const {
  const auto jet = eval_patch(patches_[patch], u, v);
  SurfaceFrame f;
  f.x = jet.x;
  f.du = jet.du;
  f.dv = jet.dv;
  f.normal = jet.du.cross(jet.dv);
  f.sqrt_g = f.normal.norm();
  return f;
}

std::vector<MatchingViolation> Geometry::check_matching() const {
  std::vector<MatchingViolation> out;
  for (const auto& e : edges_) {
    double dev = 0;
    for (int k = 0; k < 17; ++k) {
      const double t = k / 16.0;
      const double tb = e.reversed ? 1.0 - t : t;
      double ua, va, ub, vb;
      edge_point(e.edge_a, t, ua, va);
      edge_point(e.edge_b, tb, ub, vb);
      const auto xa = eval_patch(patches_[e.patch_a], ua, va).x;
      const auto xb = eval_patch(patches_[e.patch_b], ub, vb).x;
      dev = std::max(dev, (xa - xb).norm());
    }
    if (dev > kMatchTol) out.push_back({e.patch_a, e.patch_b, dev});
  }
  return out;
}

double Geometry::surface_area(int quad_order) const {
  const auto& rule = gauss_rule(quad_order);
  double area = 0;
  for (int p = 0; p < patch_count(); ++p)
    for (int i = 0; i < quad_order; ++i)
      for (int j = 0; j < quad_order; ++j)
        area += rule.weights[i] * rule.weights[j] *
                frame(p, rule.nodes[i], rule.nodes[j]).sqrt_g;
  return area;
}

namespace {

struct LineReader {
  std::istream& in;
  const std::string& name;
  int line = 0;
  std::istringstream cur;

  bool next_line() {
    std::string s;
    while (std::getline(in, s)) {
      ++line;
      if (s.find_first_not_of(" \t\r") != std::string::npos) {
        cur = std::istringstream(s);
        return true;
      }
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << name << ":" << line << ": " << what;
    throw std::runtime_error(os.str());
  }

  template <typename T>
  T get(const char* what) {
    T v;
    if (!(cur >> v)) fail(std::string("expected ") + what);
    return v;
  }
};

}  // namespace

Geometry read_geometry(std::istream& in, const std::string& name) {
  LineReader r{in, name};
  if (!r.next_line()) r.fail("empty file");
  std::string magic;
  int version = 0;
  r.cur >> magic >> version;
  if (magic != "igabem-geometry" || version != 1)
    r.fail("bad header, expected 'igabem-geometry 1'");
  if (!r.next_line()) r.fail("missing patch count");
  const int m = r.get<int>("patch count");
  if (m < 1) r.fail("patch count must be positive");

  std::vector<PatchSurface> patches;
  for (int p = 0; p < m; ++p) {
    if (!r.next_line()) r.fail("missing patch degrees/knot counts");
    const int p1 = r.get<int>("degree p1");
    const int p2 = r.get<int>("degree p2");
    const int n1 = r.get<int>("knot count n1");
    const int n2 = r.get<int>("knot count n2");

    auto read_knots = [&](int n) {
      if (!r.next_line()) r.fail("missing knot line");
      std::vector<double> k(n);
      for (int i = 0; i < n; ++i) k[i] = r.get<double>("knot");
      return k;
    };
    PatchSurface s;
    try {
      s.kv_u = KnotVector(read_knots(n1), p1);
      s.kv_v = KnotVector(read_knots(n2), p2);
    } catch (const std::invalid_argument& err) {
      r.fail(err.what());
    }
    const int n = s.count_u() * s.count_v();
    Eigen::Matrix4Xd homog(4, n);
    for (int c = 0; c < 4; ++c) {
      if (!r.next_line()) r.fail("missing control coordinate line");
      for (int i = 0; i < n; ++i) homog(c, i) = r.get<double>("control value");
    }
    s.weight = homog.row(3).transpose();
    if ((s.weight.array() <= 0.0).any()) r.fail("nonpositive weight");
    s.ctrl_w = homog.topRows<3>();
    patches.push_back(std::move(s));
  }
  return Geometry(std::move(patches));
}

Geometry load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open geometry file: " + path);
  return read_geometry(in, path);
}

void write_geometry(const Geometry& g, std::ostream& out) {
  out << "igabem-geometry 1\n" << g.patch_count() << "\n";
  out << std::setprecision(17);
  for (int p = 0; p < g.patch_count(); ++p) {
    const auto& s = g.patch(p);
    out << s.kv_u.degree << " " << s.kv_v.degree << " " << s.kv_u.knots.size()
        << " " << s.kv_v.knots.size() << "\n";
    for (size_t i = 0; i < s.kv_u.knots.size(); ++i)
      out << (i ? " " : "") << s.kv_u.knots[i];
    out << "\n";
    for (size_t i = 0; i < s.kv_v.knots.size(); ++i)
      out << (i ? " " : "") << s.kv_v.knots[i];
    out << "\n";
    const int n = s.count_u() * s.count_v();
    for (int c = 0; c < 4; ++c) {
      for (int i = 0; i < n; ++i) {
        const double v = c < 3 ? s.ctrl_w(c, i) : s.weight[i];
        out << (i ? " " : "") << v;
      }
      out << "\n";
    }
  }
}

void save_geometry(const Geometry& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write geometry file: " + path);
  write_geometry(g, out);
}

}  // namespace igabem
