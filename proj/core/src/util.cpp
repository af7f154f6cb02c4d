#include "igabem/util.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace igabem {

std::vector<Eigen::Vector3d> make_sphere_grid(double radius, int n,
                                              const Eigen::Vector3d& center) {
  if (radius <= 0 || n < 1) throw std::invalid_argument("make_sphere_grid: bad arguments");
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    const double theta = M_PI * (k + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      const double phi = 2.0 * M_PI * j / n;
      pts.push_back(center + radius * Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                                      std::sin(theta) * std::sin(phi),
                                                      std::cos(theta)));
    }
  }
  return pts;
}

void write_log(const std::vector<LogRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_log: cannot open " + path);
  os.precision(16);
  os << "M error error_rho t_mat\n";
  for (const auto& r : rows)
    os << r.m << ' ' << r.error << ' ' << r.error_rho << ' ' << r.t_mat << '\n';
  if (!os) throw std::runtime_error("write_log: write failed for " + path);
}

void write_potential_csv(const std::vector<Eigen::Vector3d>& pts,
                         const Eigen::MatrixXcd& values, const std::string& path) {
  if (static_cast<size_t>(values.cols()) != pts.size())
    throw std::invalid_argument("write_potential_csv: size mismatch");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_potential_csv: cannot open " + path);
  os.precision(16);
  for (size_t i = 0; i < pts.size(); ++i) {
    os << pts[i].x() << ' ' << pts[i].y() << ' ' << pts[i].z();
    for (Eigen::Index c = 0; c < values.rows(); ++c)
      os << ' ' << values(c, i).real() << ' ' << values(c, i).imag();
    os << '\n';
  }
  if (!os) throw std::runtime_error("write_potential_csv: write failed for " + path);
}

}  // namespace igabem
