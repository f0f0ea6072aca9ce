// SPDX-License-Identifier: Apache-2.0
#include "lodgs/projection.hpp"

#include <cmath>
#include <limits>

#include "lodgs/mark_core.hpp"

namespace lodgs {

CameraGeom CameraGeom::make(const Camera& cam) {
    CameraGeom g;
    for (int i = 0; i < 9; ++i) g.rot[i] = cam.world_to_cam_rotation[i];
    for (int i = 0; i < 3; ++i) g.trans[i] = cam.world_to_cam_translation[i];
    g.fx = cam.fx;
    g.fy = cam.fy;
    g.cx = cam.cx;
    g.cy = cam.cy;
    g.width = cam.width;
    g.height = cam.height;
    g.znear = cam.near;
    g.zfar = cam.far;

    auto side = [](double n0, double n1, double n2, double* plane) {
        const double len = std::sqrt(n0 * n0 + n1 * n1 + n2 * n2);
        plane[0] = n0 / len;
        plane[1] = n1 / len;
        plane[2] = n2 / len;
        plane[3] = 0.0;
    };
    g.planes[0][0] = 0; g.planes[0][1] = 0; g.planes[0][2] = 1;  g.planes[0][3] = -g.znear;
    g.planes[1][0] = 0; g.planes[1][1] = 0; g.planes[1][2] = -1; g.planes[1][3] = g.zfar;
    side(g.fx, 0, g.cx, g.planes[2]);             // x_pix >= 0
    side(-g.fx, 0, g.width - g.cx, g.planes[3]);  // x_pix <= width
    side(0, g.fy, g.cy, g.planes[4]);             // y_pix >= 0
    side(0, -g.fy, g.height - g.cy, g.planes[5]); // y_pix <= height
    return g;
}

bool in_frustum(const CameraGeom& g, const GaussianNode& n) {
    const double x = n.mean.x, y = n.mean.y, z = n.mean.z;
    const double tx = (g.rot[0] * x + g.rot[1] * y) + (g.rot[2] * z + g.trans[0]);
    const double ty = (g.rot[3] * x + g.rot[4] * y) + (g.rot[5] * z + g.trans[1]);
    const double tz = (g.rot[6] * x + g.rot[7] * y) + (g.rot[8] * z + g.trans[2]);
    const double smax = std::max(std::max(double(n.scale.x), double(n.scale.y)),
                                 double(n.scale.z));
    const double r3 = 3.0 * smax;
    for (int p = 0; p < 6; ++p) {
        const double dist = (g.planes[p][0] * tx + g.planes[p][1] * ty) +
                            (g.planes[p][2] * tz + g.planes[p][3]);
        if (!(dist >= -r3)) return false;
    }
    return true;
}

bool in_frustum(const GaussianNode& node, const Camera& cam) {
    return in_frustum(CameraGeom::make(cam), node);
}

std::optional<Projected2D> project(const CameraGeom& g, const GaussianNode& n,
                                   NodeIndex index) {
    const MarkOut m = mark_core(g, n.mean.x, n.mean.y, n.mean.z, n.scale.x,
                                n.scale.y, n.scale.z, n.rotation.w, n.rotation.x,
                                n.rotation.y, n.rotation.z,
                                std::numeric_limits<double>::infinity());
    if (!m.vis || !m.z_ok) return std::nullopt;

    Projected2D p;
    p.node = index;
    const double inv_z = 1.0 / m.tz;
    p.mean2d_x = g.fx * (m.tx * inv_z) + g.cx;
    p.mean2d_y = g.fy * (m.ty * inv_z) + g.cy;
    p.cov_a = m.a;
    p.cov_b = m.b;
    p.cov_c = m.c;
    const double det = m.a * m.c - m.b * m.b;
    p.conic_a = m.c / det;
    p.conic_b = -m.b / det;
    p.conic_c = m.a / det;
    p.sigma_max = std::sqrt(m.lambda_max);
    p.sigma_min = std::sqrt(m.lambda_min);
    p.depth = m.tz;
    p.radius = m.radius;

    for (double v : {p.mean2d_x, p.mean2d_y, p.cov_a, p.cov_b, p.cov_c, p.conic_a,
                     p.conic_b, p.conic_c, p.sigma_max, p.sigma_min, p.depth,
                     p.radius})
        if (!std::isfinite(v))
            throw ValidationError("projection produced non-finite values");
    return p;
}

std::optional<Projected2D> project(const GaussianNode& node, const Camera& cam) {
    return project(CameraGeom::make(cam), node, 0);
}

double radius_2d(double a, double b, double c) {
    const double det = a * c - b * b;
    if (!(a > 0) || !(det > 0))
        throw ValidationError("radius_2d: matrix not positive definite");
    const double mid = 0.5 * (a + c);
    const double disc = std::sqrt(std::max(mid * mid - det, 0.0));
    return 3.0 * std::sqrt(mid + disc);
}

}  // namespace lodgs
