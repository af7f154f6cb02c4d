#include "igabem/spaces.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace igabem {

namespace {

// Union-find with a relative orientation sign towards the root.
struct SignedUnionFind {
  std::vector<int> parent;
  std::vector<double> sign;  // coefficient of this node = sign * root value

  explicit SignedUnionFind(int n) : parent(n), sign(n, 1.0) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }

  std::pair<int, double> find(int i) {
    if (parent[i] == i) return {i, 1.0};
    auto [r, s] = find(parent[i]);
    parent[i] = r;
    sign[i] *= s;
    return {r, sign[i]};
  }

  // enforce value_b = rel * value_a
  void unite(int a, int b, double rel) {
    auto [ra, sa] = find(a);
    auto [rb, sb] = find(b);
    // value_a = sa * root_a, value_b = sb * root_b
    if (ra == rb) {
      if (sb != rel * sa)
        throw std::runtime_error("Discretization: inconsistent edge orientation gluing");
      return;
    }
    parent[rb] = ra;
    sign[rb] = rel * sa / sb;
  }
};

int grid_pos_on_edge(int edge, int ix, int iy) {
  return (edge == 0 || edge == 2) ? ix : iy;
}

bool element_on_edge(int edge, int ix, int iy, int n) {
  switch (edge) {
    case 0: return iy == 0;
    case 1: return ix == n - 1;
    case 2: return iy == n - 1;
    case 3: return ix == 0;
  }
  return false;
}

// element-square corner (0..3) at the t=0 / t=1 end of a patch edge
int edge_end_corner(int edge, int end) {
  static const int tbl[4][2] = {{0, 1}, {1, 3}, {2, 3}, {0, 2}};
  return tbl[edge][end];
}

bool element_at_corner(int corner, int ix, int iy, int n) {
  const int cx = (corner == 1 || corner == 3) ? n - 1 : 0;
  const int cy = (corner >= 2) ? n - 1 : 0;
  return ix == cx && iy == cy;
}

}  // namespace

Discretization::Discretization(std::shared_ptr<const Geometry> g, const Pde& pde,
                               int degree, int rep, int level)
    : geom_(std::move(g)), pde_(pde), degree_(degree), rep_(rep), level_(level) {
  if (!geom_) throw std::invalid_argument("Discretization: null geometry");
  if (level < 0) throw std::invalid_argument("Discretization: negative level");
  if (pde.is_vector()) {
    if (degree < 1)
      throw std::invalid_argument("Discretization: Maxwell requires degree P >= 1");
    if (rep != 1)
      throw std::invalid_argument(
          "Discretization: the div-conforming space supports knot repetition 1 only");
  } else if (degree < 0) {
    throw std::invalid_argument("Discretization: negative degree");
  }
  if (rep < 1 || rep > std::max(degree, 0) + 1)
    throw std::invalid_argument("Discretization: knot repetition out of range");

  const auto violations = geom_->check_matching();
  if (!violations.empty()) {
    std::ostringstream os;
    os << "Discretization: geometry fails the matching condition ("
       << violations.size() << " edge pair(s), max deviation "
       << violations.front().max_deviation << ")";
    throw std::runtime_error(os.str());
  }

  // cross-patch adjacency tables
  const int m = geom_->patch_count();
  cross_edges_.assign(m, std::vector<std::vector<CrossEdge>>(m));
  cross_corners_.assign(m, std::vector<std::vector<CrossCorner>>(m));
  for (const auto& e : geom_->edge_idents()) {
    cross_edges_[e.patch_a][e.patch_b].push_back({e.edge_a, e.edge_b, e.reversed});
    cross_edges_[e.patch_b][e.patch_a].push_back({e.edge_b, e.edge_a, e.reversed});
  }
  for (const auto& v : geom_->vertex_idents()) {
    cross_corners_[v.patch_a][v.patch_b].push_back({v.corner_a, v.corner_b});
    cross_corners_[v.patch_b][v.patch_a].push_back({v.corner_b, v.corner_a});
  }

  build_elements();
  if (pde.is_vector())
    build_maxwell();
  else
    build_scalar();
}

void Discretization::build_elements() {
  const int n = 1 << level_;
  const double h = 1.0 / n;
  const int m = geom_->patch_count();
  epp_ = n * n;
  elements_.reserve(static_cast<size_t>(m) * epp_);
  const int ns = degree_ + 2;  // bounding-box sample grid per element
  for (int p = 0; p < m; ++p)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        Element el;
        el.patch = p;
        el.ix = ix;
        el.iy = iy;
        el.h = h;
        el.origin = Eigen::Vector2d(ix * h, iy * h);
        el.box.setEmpty();
        for (int a = 0; a < ns; ++a)
          for (int b = 0; b < ns; ++b) {
            const double u = el.origin.x() + h * a / (ns - 1.0);
            const double v = el.origin.y() + h * b / (ns - 1.0);
            el.box.extend(eval_patch(geom_->patch(p), u, v).x);
          }
        const Eigen::Vector3d c = el.box.center();
        const Eigen::Vector3d half = 1.1 * (el.box.max() - c);
        el.box = Eigen::AlignedBox3d(c - half, c + half);
        elements_.push_back(std::move(el));
      }
  // reorder within patches to e = patch*epp + ix + n*iy
  // (the loops above already produce this order)
}

void Discretization::build_scalar() {
  // density space: degrees (P-1, P-1) on the truncated knot vector,
  // piecewise constants for P = 0
  if (degree_ == 0)
    scalar_kv_ = make_uniform_knots(0, level_, 1);
  else
    scalar_kv_ = make_uniform_knots(degree_ - 1, level_, std::min(rep_, degree_));
  scalar_k_ = scalar_kv_.size();

  const int q = scalar_kv_.degree;
  n_local_ = (q + 1) * (q + 1);
  const int per_patch = scalar_k_ * scalar_k_;
  n_dofs_ = geom_->patch_count() * per_patch;

  loc2glob_.resize(elements_.size());
  for (size_t e = 0; e < elements_.size(); ++e) {
    const auto& el = elements_[e];
    const double mid = el.origin.x() + 0.5 * el.h;
    const double midv = el.origin.y() + 0.5 * el.h;
    const int fu = scalar_kv_.find_span(mid) - q;
    const int fv = scalar_kv_.find_span(midv) - q;
    auto& map = loc2glob_[e];
    map.reserve(n_local_);
    for (int j = 0; j <= q; ++j)
      for (int i = 0; i <= q; ++i)
        map.emplace_back(el.patch * per_patch + (fu + i) + scalar_k_ * (fv + j), 1.0);
  }
}

void Discretization::build_maxwell() {
  const int P = degree_;
  vec_kv_p_ = make_uniform_knots(P, level_, 1);
  vec_kv_q_ = make_uniform_knots(P - 1, level_, 1);  // truncated vector
  vec_kp_ = vec_kv_p_.size();
  vec_kq_ = vec_kv_q_.size();

  const int m = geom_->patch_count();
  const int per_block = vec_kp_ * vec_kq_;
  const int per_patch = 2 * per_block;
  const int n_raw = m * per_patch;

  // raw index helpers: u-block (i over kp, j over kq), v-block (i over kq,
  // j over kp)
  auto raw_u = [&](int patch, int i, int j) { return patch * per_patch + i + vec_kp_ * j; };
  auto raw_v = [&](int patch, int i, int j) {
    return patch * per_patch + per_block + i + vec_kq_ * j;
  };

  // edge DOF strip, ordered by the edge parameter, with the sign of the
  // outward reference flux
  auto strip = [&](int patch, int edge, int s) -> std::pair<int, double> {
    switch (edge) {
      case 0: return {raw_v(patch, s, 0), -1.0};
      case 1: return {raw_u(patch, vec_kp_ - 1, s), +1.0};
      case 2: return {raw_v(patch, s, vec_kp_ - 1), +1.0};
      case 3: return {raw_u(patch, 0, s), -1.0};
    }
    throw std::logic_error("strip: bad edge");
  };

  SignedUnionFind uf(n_raw);
  for (const auto& e : geom_->edge_idents()) {
    for (int s = 0; s < vec_kq_; ++s) {
      const int sb = e.reversed ? vec_kq_ - 1 - s : s;
      const auto [ra, ea] = strip(e.patch_a, e.edge_a, s);
      const auto [rb, eb] = strip(e.patch_b, e.edge_b, sb);
      // outward fluxes must cancel: sign_a*eps_a + sign_b*eps_b = 0
      uf.unite(ra, rb, -ea * eb);
    }
  }

  // deterministic global numbering: roots in raw-index order
  std::vector<int> glob(n_raw, -1);
  std::vector<double> gsign(n_raw, 1.0);
  int next = 0;
  for (int i = 0; i < n_raw; ++i) {
    auto [r, s] = uf.find(i);
    if (glob[r] < 0) glob[r] = next++;
    glob[i] = glob[r];
    gsign[i] = s;
  }
  n_dofs_ = next;

  n_local_ = 2 * (P + 1) * P;
  loc2glob_.resize(elements_.size());
  for (size_t e = 0; e < elements_.size(); ++e) {
    const auto& el = elements_[e];
    const double midu = el.origin.x() + 0.5 * el.h;
    const double midv = el.origin.y() + 0.5 * el.h;
    const int fpu = vec_kv_p_.find_span(midu) - P;
    const int fpv = vec_kv_p_.find_span(midv) - P;
    const int fqu = vec_kv_q_.find_span(midu) - (P - 1);
    const int fqv = vec_kv_q_.find_span(midv) - (P - 1);
    auto& map = loc2glob_[e];
    map.reserve(n_local_);
    for (int j = 0; j < P; ++j)
      for (int i = 0; i <= P; ++i) {
        const int r = raw_u(el.patch, fpu + i, fqv + j);
        map.emplace_back(glob[r], gsign[r]);
      }
    for (int j = 0; j <= P; ++j)
      for (int i = 0; i < P; ++i) {
        const int r = raw_v(el.patch, fqu + i, fpv + j);
        map.emplace_back(glob[r], gsign[r]);
      }
  }
}

ShapeSample Discretization::sample_shapes(int e, double u_loc, double v_loc) const {
  const auto& el = elements_[e];
  const double u = el.origin.x() + el.h * u_loc;
  const double v = el.origin.y() + el.h * v_loc;

  ShapeSample out;
  if (!pde_.is_vector()) {
    const int q = scalar_kv_.degree;
    const int su = scalar_kv_.find_span(el.origin.x() + 0.5 * el.h);
    const int sv = scalar_kv_.find_span(el.origin.y() + 0.5 * el.h);
    Eigen::VectorXd bu, bv;
    eval_basis_span(scalar_kv_, su, u, bu);
    eval_basis_span(scalar_kv_, sv, v, bv);
    out.value.resize(n_local_);
    for (int j = 0; j <= q; ++j)
      for (int i = 0; i <= q; ++i) out.value[i + (q + 1) * j] = bu[i] * bv[j];
    return out;
  }

  const int P = degree_;
  const auto f = geom_->frame(el.patch, u, v);
  const double inv_g = 1.0 / f.sqrt_g;
  const int spu = vec_kv_p_.find_span(el.origin.x() + 0.5 * el.h);
  const int spv = vec_kv_p_.find_span(el.origin.y() + 0.5 * el.h);
  const int squ = vec_kv_q_.find_span(el.origin.x() + 0.5 * el.h);
  const int sqv = vec_kv_q_.find_span(el.origin.y() + 0.5 * el.h);
  Eigen::VectorXd bpu, bpv, bqu, bqv, dpu, dpv;
  eval_basis_span(vec_kv_p_, spu, u, bpu);
  eval_basis_span(vec_kv_p_, spv, v, bpv);
  eval_basis_span(vec_kv_q_, squ, u, bqu);
  eval_basis_span(vec_kv_q_, sqv, v, bqv);
  eval_basis_deriv_span(vec_kv_p_, spu, u, 1, dpu);
  eval_basis_deriv_span(vec_kv_p_, spv, v, 1, dpv);

  out.field.resize(3, n_local_);
  out.divergence.resize(n_local_);
  int l = 0;
  // u-block: reference field (b^P_i(u) b^{P-1}_j(v), 0)
  for (int j = 0; j < P; ++j)
    for (int i = 0; i <= P; ++i, ++l) {
      out.field.col(l) = inv_g * f.du * (bpu[i] * bqv[j]);
      out.divergence[l] = inv_g * dpu[i] * bqv[j];
    }
  // v-block: reference field (0, b^{P-1}_i(u) b^P_j(v))
  for (int j = 0; j <= P; ++j)
    for (int i = 0; i < P; ++i, ++l) {
      out.field.col(l) = inv_g * f.dv * (bqu[i] * bpv[j]);
      out.divergence[l] = inv_g * bqu[i] * dpv[j];
    }
  return out;
}

PairInfo Discretization::classify_pair(int ea, int eb) const {
  PairInfo info;
  if (ea == eb) {
    info.cls = PairClass::Coincident;
    return info;
  }
  const auto& a = elements_[ea];
  const auto& b = elements_[eb];
  const int n = 1 << level_;

  int best = 0;  // 0 far, 1 vertex, 2 edge
  PairInfo cand;

  if (a.patch == b.patch) {
    const int dx = b.ix - a.ix, dy = b.iy - a.iy;
    if (std::abs(dx) <= 1 && std::abs(dy) <= 1) {
      if (std::abs(dx) + std::abs(dy) == 1) {
        // parametric edge neighbors
        int edge_a, edge_b;
        if (dx == 1) { edge_a = 1; edge_b = 3; }
        else if (dx == -1) { edge_a = 3; edge_b = 1; }
        else if (dy == 1) { edge_a = 2; edge_b = 0; }
        else { edge_a = 0; edge_b = 2; }
        cand.cls = PairClass::Edge;
        cand.map_a = map_bottom_to_edge(edge_a, false);
        cand.map_b = map_bottom_to_edge(edge_b, false);
        best = 2;
      } else {
        const int ca = (dx > 0 ? 1 : 0) + (dy > 0 ? 2 : 0);
        const int cb = (dx > 0 ? 0 : 1) + (dy > 0 ? 0 : 2);
        cand.cls = PairClass::Vertex;
        cand.map_a = map_origin_to_corner(ca);
        cand.map_b = map_origin_to_corner(cb);
        best = 1;
      }
    }
  }

  // adjacency across glued patch edges
  if (best < 2) {
    for (const auto& ce : cross_edges_[a.patch][b.patch]) {
      if (!element_on_edge(ce.edge_a, a.ix, a.iy, n)) continue;
      if (!element_on_edge(ce.edge_b, b.ix, b.iy, n)) continue;
      const int sa = grid_pos_on_edge(ce.edge_a, a.ix, a.iy);
      const int sb_raw = grid_pos_on_edge(ce.edge_b, b.ix, b.iy);
      const int sb = ce.reversed ? n - 1 - sb_raw : sb_raw;
      if (sa == sb) {
        cand.cls = PairClass::Edge;
        cand.map_a = map_bottom_to_edge(ce.edge_a, false);
        cand.map_b = map_bottom_to_edge(ce.edge_b, ce.reversed);
        best = 2;
        break;
      }
      if (std::abs(sa - sb) == 1 && best < 1) {
        // corner touch at the boundary between positions min(sa,sb)+1
        const int end_a = (sb > sa) ? 1 : 0;
        // the shared point sits at b's opposite end in aligned terms;
        // reversal flips b's own edge parameter once more
        const int end_b_pos = ce.reversed ? end_a : 1 - end_a;
        const int ca = edge_end_corner(ce.edge_a, end_a);
        const int cb = edge_end_corner(ce.edge_b, end_b_pos);
        cand.cls = PairClass::Vertex;
        cand.map_a = map_origin_to_corner(ca);
        cand.map_b = map_origin_to_corner(cb);
        best = 1;
      }
    }
  }

  // corner-only contact between patches
  if (best < 1 && a.patch != b.patch) {
    for (const auto& cc : cross_corners_[a.patch][b.patch]) {
      if (element_at_corner(cc.corner_a, a.ix, a.iy, n) &&
          element_at_corner(cc.corner_b, b.ix, b.iy, n)) {
        cand.cls = PairClass::Vertex;
        cand.map_a = map_origin_to_corner(cc.corner_a);
        cand.map_b = map_origin_to_corner(cc.corner_b);
        best = 1;
        break;
      }
    }
  }

  if (best > 0) info = cand;
  return info;
}

}  // namespace igabem
