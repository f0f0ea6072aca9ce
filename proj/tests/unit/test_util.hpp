// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lodgs/image.hpp"
#include "lodgs/kernels.hpp"
#include "lodgs/rasterizer.hpp"
#include "lodgs/rng.hpp"
#include "lodgs/scene.hpp"
#include "lodgs/tree_builder.hpp"

namespace lodgs::test {

// Identity-orientation camera at the origin looking down +z; a scene near
// world (0, 0, dist) sits in front of it.
inline Camera front_camera(std::uint32_t w, std::uint32_t h,
                           double focal = 100.0) {
    Camera c;
    c.width = w;
    c.height = h;
    c.fx = c.fy = focal;
    c.cx = w / 2.0;
    c.cy = h / 2.0;
    return c;
}

// Camera in a random pose orbiting the origin at the given distance, looking
// roughly at the scene center.
inline Camera orbit_camera(Rng& rng, std::uint32_t w, std::uint32_t h,
                           double dist) {
    const double az = rng.uniform(0.0, 2.0 * 3.14159265358979);
    const double el = rng.uniform(-0.9, 0.9);
    const Vec3d eye{dist * std::cos(el) * std::cos(az),
                    dist * std::sin(el), dist * std::cos(el) * std::sin(az)};
    // Build an orthonormal look-at basis: z_cam toward the origin.
    Vec3d zc = eye * -1.0;
    const double zn = norm(zc);
    zc = zc * (1.0 / zn);
    Vec3d up{0, 1, 0};
    if (std::abs(dot(up, zc)) > 0.99) up = {1, 0, 0};
    Vec3d xc{up.y * zc.z - up.z * zc.y, up.z * zc.x - up.x * zc.z,
             up.x * zc.y - up.y * zc.x};
    const double xn = norm(xc);
    xc = xc * (1.0 / xn);
    const Vec3d yc{zc.y * xc.z - zc.z * xc.y, zc.z * xc.x - zc.x * xc.z,
                   zc.x * xc.y - zc.y * xc.x};

    Camera c = front_camera(w, h, rng.uniform(80.0, 260.0));
    c.world_to_cam_rotation = {xc.x, xc.y, xc.z, yc.x, yc.y,
                               yc.z,  zc.x, zc.y, zc.z};
    // t = -R * eye puts the eye at the camera origin.
    c.world_to_cam_translation = {
        -(xc.x * eye.x + xc.y * eye.y + xc.z * eye.z),
        -(yc.x * eye.x + yc.y * eye.y + yc.z * eye.z),
        -(zc.x * eye.x + zc.y * eye.y + zc.z * eye.z)};
    return c;
}

inline LoDTree make_tree(std::uint64_t seed, std::uint32_t depth,
                         std::uint32_t children = 8, float gamma = 0.5f,
                         std::uint32_t nx = 3, std::uint32_t ny = 3,
                         std::uint32_t congestion = 1) {
    SyntheticSceneSpec s;
    s.nx = nx;
    s.ny = ny;
    s.seed = seed;
    s.congestion = congestion;
    TreeBuildConfig c;
    c.depth = depth;
    c.children_per_node = children;
    c.shrink_factor = gamma;
    c.seed = seed * 1099511628211ull + 11;
    return build_tree(generate_synthetic_scene(s), c);
}

// Independent per-pixel evaluator of the blend contract; written against the
// stated semantics, not against the kernels.
inline Image reference_blend(const std::vector<TilePair>& sorted,
                             const BlendList& list, const TileGrid& grid,
                             int width, int height,
                             std::vector<double>* kpc_out = nullptr) {
    Image img = Image::black(width, height);
    if (kpc_out) kpc_out->assign(sorted.size(), 0.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int tile = (y / kTileH) * grid.tiles_x + (x / kTileW);
            double T = 1.0, c[3] = {0, 0, 0};
            for (std::size_t j = 0; j < sorted.size(); ++j) {
                if (int(sorted[j].tile) != tile) continue;
                const std::uint32_t g = sorted[j].gaussian;
                const double dx = (x + 0.5) - list.mean_x[g];
                const double dy = (y + 0.5) - list.mean_y[g];
                const double power =
                    -0.5 * (list.conic_a[g] * dx * dx +
                            list.conic_c[g] * dy * dy) -
                    list.conic_b[g] * dx * dy;
                const double alpha =
                    std::min(list.opacity[g] * std::exp(power), kAlphaCap);
                if (alpha < kMinAlpha) continue;
                const double w = alpha * T;
                c[0] += list.col_r[g] * w;
                c[1] += list.col_g[g] * w;
                c[2] += list.col_b[g] * w;
                if (kpc_out) (*kpc_out)[j] += w;
                T *= 1.0 - alpha;
                if (T < kTermT) break;
            }
            float* px = img.pixel(x, y);
            px[0] = float(c[0]);
            px[1] = float(c[1]);
            px[2] = float(c[2]);
        }
    }
    return img;
}

// Hand-assembled screen-space gaussian, bypassing projection.
inline void push_flat(BlendList& list, double mx, double my, double conic,
                      double opacity, Vec3d color, double radius, float depth,
                      NodeIndex node = 0) {
    list.mean_x.push_back(mx);
    list.mean_y.push_back(my);
    list.conic_a.push_back(conic);
    list.conic_b.push_back(0.0);
    list.conic_c.push_back(conic);
    list.opacity.push_back(opacity);
    list.col_r.push_back(color.x);
    list.col_g.push_back(color.y);
    list.col_b.push_back(color.z);
    list.radius.push_back(radius);
    list.depth.push_back(depth);
    list.node.push_back(node);
}

inline double max_abs_diff(const Image& a, const Image& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i)
        m = std::max(m, std::abs(double(a.rgb[i]) - double(b.rgb[i])));
    return m;
}

}  // namespace lodgs::test
