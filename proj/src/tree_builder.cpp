// SPDX-License-Identifier: Apache-2.0
#include "lodgs/tree_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lodgs/rng.hpp"

namespace lodgs {

Vec3d corner_offset(std::uint32_t k, float sx, float sy, float sz) {
    return {(k & 1 ? 0.5 : -0.5) * double(sx),
            (k & 2 ? 0.5 : -0.5) * double(sy),
            (k & 4 ? 0.5 : -0.5) * double(sz)};
}

namespace {

void check_config(const TreeBuildConfig& c) {
    if (c.depth < 1) throw ValidationError("build config: depth >= 1");
    if (!(c.shrink_factor > 0.0f && c.shrink_factor <= 0.8f))
        throw ValidationError("build config: shrink_factor in (0, 0.8]");
    if (c.children_per_node < 1 || c.children_per_node > 8)
        throw ValidationError("build config: children_per_node in {1..8}");
}

void check_root(const GaussianNode& r, std::size_t i) {
    auto fail = [&](const char* rule) {
        throw ValidationError("root " + std::to_string(i) + ": " + rule);
    };
    if (r.level != 0) fail("level == 0");
    if (r.parent != kRootParent) fail("parent is ROOT");
    const double qn = std::sqrt(double(r.rotation.w) * r.rotation.w +
                                double(r.rotation.x) * r.rotation.x +
                                double(r.rotation.y) * r.rotation.y +
                                double(r.rotation.z) * r.rotation.z);
    if (std::abs(qn - 1.0) > 1e-6) fail("unit quaternion");
    if (!(r.scale.x > 0 && r.scale.y > 0 && r.scale.z > 0)) fail("scale > 0");
    if (!(r.opacity > 0 && r.opacity <= 1)) fail("opacity in (0,1]");
    for (float ch : {r.color.x, r.color.y, r.color.z})
        if (!(ch >= 0 && ch <= 1)) fail("color in [0,1]");
}

std::uint64_t count_nodes(std::size_t n_roots, std::uint32_t depth, std::uint32_t k) {
    // Sum of n_roots * k^l for l = 0..depth, capped at the index-type limit.
    const std::uint64_t cap = std::uint64_t(kRootParent);  // sentinel stays reserved
    std::uint64_t total = 0, per_level = n_roots;
    for (std::uint32_t l = 0; l <= depth; ++l) {
        total += per_level;
        if (total >= cap) throw ValidationError("tree node count overflows index type");
        if (l < depth && per_level > cap / k)
            throw ValidationError("tree node count overflows index type");
        per_level *= k;
    }
    return total;
}

// Ascending corner ids for this parent; all 8 when k == 8.
void select_corners(std::uint32_t k, std::uint64_t seed, NodeIndex parent,
                    std::uint32_t out[8]) {
    for (std::uint32_t i = 0; i < 8; ++i) out[i] = i;
    if (k == 8) return;
    Rng rng(mix_seed(seed, parent));
    for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint32_t j = i + std::uint32_t(rng.next_below(8 - i));
        std::swap(out[i], out[j]);
    }
    std::sort(out, out + k);
}

}  // namespace

LoDTree build_tree(const std::vector<GaussianNode>& roots, const TreeBuildConfig& config) {
    check_config(config);
    if (roots.empty()) throw ValidationError("build_tree: no roots");
    for (std::size_t i = 0; i < roots.size(); ++i) check_root(roots[i], i);

    const std::uint32_t L = config.depth;
    const std::uint32_t K = config.children_per_node;
    const std::uint64_t total = count_nodes(roots.size(), L, K);

    LoDTree t;
    t.shrink_factor = config.shrink_factor;
    t.reserve(total);
    for (const GaussianNode& r : roots) {
        GaussianNode n = r;
        n.leaf = false;
        t.push_node(n);
    }

    for (std::uint32_t level = 1; level <= L; ++level) {
        const std::uint32_t begin = t.level_begin(level - 1);
        const std::uint32_t end = t.level_end(level - 1);
        const bool leaf = level == L;
        for (NodeIndex p = begin; p < end; ++p) {
            const Mat3d rot = rotation_matrix(
                Quatf{t.quat_w[p], t.quat_x[p], t.quat_y[p], t.quat_z[p]});
            const Vec3d mean{t.mean_x[p], t.mean_y[p], t.mean_z[p]};
            const float sx = t.scale_x[p], sy = t.scale_y[p], sz = t.scale_z[p];

            std::uint32_t corners[8];
            select_corners(K, config.seed, p, corners);
            for (std::uint32_t c = 0; c < K; ++c) {
                const Vec3d child_mean = mean + rot * corner_offset(corners[c], sx, sy, sz);
                GaussianNode n;
                n.mean = {float(child_mean.x), float(child_mean.y), float(child_mean.z)};
                n.scale = {sx * config.shrink_factor, sy * config.shrink_factor,
                           sz * config.shrink_factor};
                n.rotation = {t.quat_w[p], t.quat_x[p], t.quat_y[p], t.quat_z[p]};
                n.opacity = t.opacity[p];
                n.color = {t.color_r[p], t.color_g[p], t.color_b[p]};
                n.level = level;
                n.parent = p;
                n.leaf = leaf;
                t.push_node(n);
            }
        }
    }

    t.rebuild_derived();
    return t;
}

std::vector<GaussianNode> generate_synthetic_scene(const SyntheticSceneSpec& spec) {
    if (spec.nx < 1 || spec.ny < 1) throw ValidationError("scene spec: nx, ny >= 1");
    if (!(spec.spacing > 0)) throw ValidationError("scene spec: spacing > 0");
    if (!(spec.scale_min > 0 && spec.scale_min <= spec.scale_max))
        throw ValidationError("scene spec: 0 < scale_min <= scale_max");
    if (!(spec.opacity_min > 0 && spec.opacity_min <= spec.opacity_max &&
          spec.opacity_max <= 1))
        throw ValidationError("scene spec: opacity range within (0,1]");
    if (spec.palette.empty()) throw ValidationError("scene spec: palette non-empty");
    if (spec.congestion < 1) throw ValidationError("scene spec: congestion >= 1");

    std::vector<GaussianNode> out;
    out.reserve(std::size_t(spec.nx) * spec.ny * spec.congestion);
    const double spacing = spec.spacing;
    // Grid is centered on the origin in the XY plane.
    const double x0 = -0.5 * spacing * (spec.nx - 1);
    const double y0 = -0.5 * spacing * (spec.ny - 1);

    for (std::uint32_t iy = 0; iy < spec.ny; ++iy) {
        for (std::uint32_t ix = 0; ix < spec.nx; ++ix) {
            Rng rng(mix_seed(spec.seed, std::uint64_t(iy) * spec.nx + ix));
            for (std::uint32_t c = 0; c < spec.congestion; ++c) {
                GaussianNode n;
                n.mean.x = float(x0 + ix * spacing + rng.uniform(-0.35, 0.35) * spacing);
                n.mean.y = float(y0 + iy * spacing + rng.uniform(-0.35, 0.35) * spacing);
                n.mean.z = float(rng.uniform(-0.5, 0.5) * spacing);
                n.scale.x = float(rng.uniform(spec.scale_min, spec.scale_max));
                n.scale.y = float(rng.uniform(spec.scale_min, spec.scale_max));
                n.scale.z = float(rng.uniform(spec.scale_min, spec.scale_max));

                // Uniform random rotation (Shoemake's subgroup method).
                const double u1 = rng.next_double();
                const double a = 2.0 * std::numbers::pi * rng.next_double();
                const double b = 2.0 * std::numbers::pi * rng.next_double();
                const double r1 = std::sqrt(1.0 - u1), r2 = std::sqrt(u1);
                n.rotation = {float(r2 * std::cos(b)), float(r1 * std::sin(a)),
                              float(r1 * std::cos(a)), float(r2 * std::sin(b))};

                n.opacity = float(rng.uniform(spec.opacity_min, spec.opacity_max));
                n.color = spec.palette[rng.next_below(spec.palette.size())];
                n.level = 0;
                n.parent = kRootParent;
                n.leaf = true;
                out.push_back(n);
            }
        }
    }
    return out;
}

std::vector<NodeIndex> ancestor_chain(const LoDTree& tree, NodeIndex node) {
    if (node >= tree.node_count())
        throw std::out_of_range("ancestor_chain: node index out of range");
    std::vector<NodeIndex> chain;
    NodeIndex p = tree.parent[node];
    while (p != kRootParent) {
        chain.push_back(p);
        p = tree.parent[p];
    }
    return chain;
}

}  // namespace lodgs
