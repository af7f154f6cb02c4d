// Legacy ASCII VTK export of geometries and solved densities.
#pragma once

#include <string>

#include "igabem/spaces.hpp"

namespace igabem {

// Per-patch structured quad tessellation at the given subdivisions per
// direction; no point data.
void write_geometry_vtk(const Geometry& geom, int subdiv, const std::string& path);

// Tessellation at 2^L * (P+1) subdivisions per direction with the density
// magnitude as point data (scalar kinds: the value respectively its
// modulus; Maxwell: Euclidean norm of the lifted surface current).
void write_density_vtk(const Discretization& disc, const Eigen::VectorXd& rho,
                       const std::string& path);
void write_density_vtk(const Discretization& disc, const Eigen::VectorXcd& rho,
                       const std::string& path);

}  // namespace igabem
