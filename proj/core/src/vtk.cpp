#include "igabem/vtk.hpp"

#include <fstream>
#include <functional>
#include <stdexcept>

namespace igabem {

namespace {

// dense quad tessellation of every patch with a scalar sampled per point;
// sampler may be null for geometry-only export
void write_vtk_impl(const Geometry& geom, int subdiv, const std::string& path,
                    const std::function<double(int, double, double)>& sampler) {
  if (subdiv < 1) throw std::invalid_argument("vtk export: subdiv must be positive");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("vtk export: cannot open " + path);
  os.precision(17);

  const int np = geom.patch_count();
  const int s = subdiv;
  const int ppp = (s + 1) * (s + 1);  // points per patch
  os << "# vtk DataFile Version 3.0\n";
  os << "igabem surface\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << np * ppp << " double\n";
  for (int p = 0; p < np; ++p)
    for (int j = 0; j <= s; ++j)
      for (int i = 0; i <= s; ++i) {
        const Eigen::Vector3d x =
            eval_patch(geom.patch(p), double(i) / s, double(j) / s).x;
        os << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
      }
  const int nc = np * s * s;
  os << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (int p = 0; p < np; ++p) {
    const int base = p * ppp;
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < s; ++i) {
        const int a = base + i + (s + 1) * j;
        os << "4 " << a << ' ' << a + 1 << ' ' << a + s + 2 << ' ' << a + s + 1 << '\n';
      }
  }
  os << "CELL_TYPES " << nc << '\n';
  for (int c = 0; c < nc; ++c) os << "9\n";
  if (sampler) {
    os << "POINT_DATA " << np * ppp << '\n';
    os << "SCALARS density double 1\n";
    os << "LOOKUP_TABLE default\n";
    for (int p = 0; p < np; ++p)
      for (int j = 0; j <= s; ++j)
        for (int i = 0; i <= s; ++i)
          os << sampler(p, double(i) / s, double(j) / s) << '\n';
  }
  if (!os) throw std::runtime_error("vtk export: write failed for " + path);
}

// density evaluation at a patch-global parameter point
template <typename Scalar>
double density_at(const Discretization& disc, const Eigen::Matrix<Scalar, -1, 1>& rho,
                  int patch, double u, double v) {
  const int n = 1 << disc.level();
  const int ix = std::min(static_cast<int>(u * n), n - 1);
  const int iy = std::min(static_cast<int>(v * n), n - 1);
  const int e = disc.element_index(patch, ix, iy);
  const auto& el = disc.element(e);
  const auto sh =
      disc.sample_shapes(e, (u - el.origin.x()) / el.h, (v - el.origin.y()) / el.h);
  if (disc.pde().is_vector()) {
    Eigen::Matrix<Scalar, 3, 1> j = Eigen::Matrix<Scalar, 3, 1>::Zero();
    for (int l = 0; l < disc.local_count(); ++l)
      j += rho[disc.local_to_global(e, l)] * disc.local_sign(e, l) *
           sh.field.col(l).template cast<Scalar>();
    return j.norm();
  }
  Scalar val(0);
  for (int l = 0; l < disc.local_count(); ++l)
    val += rho[disc.local_to_global(e, l)] * disc.local_sign(e, l) * sh.value[l];
  if constexpr (std::is_same_v<Scalar, double>)
    return val;  // signed value for the real kind
  else
    return std::abs(val);
}

int density_subdiv(const Discretization& disc) {
  return (1 << disc.level()) * (disc.degree() + 1);
}

}  // namespace

void write_geometry_vtk(const Geometry& geom, int subdiv, const std::string& path) {
  write_vtk_impl(geom, subdiv, path, nullptr);
}

void write_density_vtk(const Discretization& disc, const Eigen::VectorXd& rho,
                       const std::string& path) {
  if (rho.size() != disc.dof_count())
    throw std::invalid_argument("write_density_vtk: density size mismatch");
  write_vtk_impl(disc.geometry(), density_subdiv(disc), path,
                 [&](int p, double u, double v) { return density_at(disc, rho, p, u, v); });
}

void write_density_vtk(const Discretization& disc, const Eigen::VectorXcd& rho,
                       const std::string& path) {
  if (rho.size() != disc.dof_count())
    throw std::invalid_argument("write_density_vtk: density size mismatch");
  write_vtk_impl(disc.geometry(), density_subdiv(disc), path,
                 [&](int p, double u, double v) { return density_at(disc, rho, p, u, v); });
}

}  // namespace igabem
