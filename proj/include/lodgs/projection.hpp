// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "lodgs/scene.hpp"

namespace lodgs {

struct Projected2D {
    double mean2d_x = 0, mean2d_y = 0;  // pixels
    double cov_a = 0, cov_b = 0, cov_c = 0;      // [[a,b],[b,c]], pixel^2
    double conic_a = 0, conic_b = 0, conic_c = 0;  // inverse of cov2d
    double sigma_max = 0, sigma_min = 0;  // standard deviations, pixels
    double depth = 0;   // camera-space z, world units
    double radius = 0;  // 3 * sigma_max, pixels
    NodeIndex node = 0;
};

// Per-camera constants in double precision, shared by every kernel variant.
// Plane convention: inside iff a*x + b*y + c*z + d >= 0, unit normals, order
// near, far, left, right, top, bottom.
struct CameraGeom {
    double rot[9];
    double trans[3];
    double fx, fy, cx, cy;
    double width, height;
    double znear, zfar;
    double planes[6][4];

    static CameraGeom make(const Camera& cam);
};

bool in_frustum(const GaussianNode& node, const Camera& cam);
bool in_frustum(const CameraGeom& geom, const GaussianNode& node);

// CULLED (nullopt) iff the frustum test fails or the center sits in front of
// the near plane; everything returned projects finitely.
std::optional<Projected2D> project(const GaussianNode& node, const Camera& cam);
std::optional<Projected2D> project(const CameraGeom& geom, const GaussianNode& node,
                                   NodeIndex index);

// 3 * sqrt(larger eigenvalue) of [[a,b],[b,c]]; throws on non-positive-definite
// input.
double radius_2d(double a, double b, double c);

}  // namespace lodgs
