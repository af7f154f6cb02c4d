// Built-in analytic geometries.
#pragma once

#include "igabem/geometry.hpp"

namespace igabem {

// Flat rectangle patch spanned by origin, origin+side_u, origin+side_v,
// as a degree-(p,p) B-spline patch with unit weights.
PatchSurface make_rectangle_patch(const Eigen::Vector3d& origin,
                                  const Eigen::Vector3d& side_u,
                                  const Eigen::Vector3d& side_v, int p = 1);

// Unit square [0,1]^2 in the z=0 plane.
Geometry make_square();

// Exact sphere of given radius about the given center, built from six
// degree-4 rational patches (stereographic lift of homogeneous Coons
// patches of the projected cube faces); twelve matching edges, outward
// normals.
Geometry make_sphere(double radius = 1.0,
                     const Eigen::Vector3d& center = Eigen::Vector3d::Zero());

}  // namespace igabem
