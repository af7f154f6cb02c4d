// Evaluation grids and artifact writers for the driver workflow.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace igabem {

// n latitudes (poles excluded, polar angles pi*(k+1/2)/n) times n equally
// spaced longitudes on the sphere of the given radius.
std::vector<Eigen::Vector3d> make_sphere_grid(double radius, int n,
                                              const Eigen::Vector3d& center =
                                                  Eigen::Vector3d::Zero());

struct LogRow {
  int m;  // refinement level
  double error;
  double error_rho;
  double t_mat;
};

// Whitespace-separated table with header `M error error_rho t_mat`
// and 16 significant digits per number.
void write_log(const std::vector<LogRow>& rows, const std::string& path);

// Per-point rows `x y z re im [re im ...]`, one pair per field component.
void write_potential_csv(const std::vector<Eigen::Vector3d>& pts,
                         const Eigen::MatrixXcd& values, const std::string& path);

}  // namespace igabem
