// SPDX-License-Identifier: Apache-2.0
#include "lodgs/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lodgs {

void LoDTree::reserve(std::size_t n) {
    for (auto* v : {&mean_x, &mean_y, &mean_z, &scale_x, &scale_y, &scale_z,
                    &quat_w, &quat_x, &quat_y, &quat_z, &opacity,
                    &color_r, &color_g, &color_b})
        v->reserve(n);
    parent.reserve(n);
    leaf.reserve(n);
}

void LoDTree::push_node(const GaussianNode& n) {
    // Nodes must arrive in level-major order so level_offsets can be
    // maintained append-only.
    if (n.level == level_count()) {
        level_offsets.push_back(std::uint32_t(node_count()));
    } else if (n.level + 1 != level_count()) {
        throw ValidationError("push_node: node level breaks level-major order");
    }
    mean_x.push_back(n.mean.x);
    mean_y.push_back(n.mean.y);
    mean_z.push_back(n.mean.z);
    scale_x.push_back(n.scale.x);
    scale_y.push_back(n.scale.y);
    scale_z.push_back(n.scale.z);
    quat_w.push_back(n.rotation.w);
    quat_x.push_back(n.rotation.x);
    quat_y.push_back(n.rotation.y);
    quat_z.push_back(n.rotation.z);
    opacity.push_back(n.opacity);
    color_r.push_back(n.color.x);
    color_g.push_back(n.color.y);
    color_b.push_back(n.color.z);
    parent.push_back(n.parent);
    leaf.push_back(n.leaf ? 1 : 0);
}

GaussianNode LoDTree::node(NodeIndex i) const {
    GaussianNode n;
    n.mean = {mean_x[i], mean_y[i], mean_z[i]};
    n.scale = {scale_x[i], scale_y[i], scale_z[i]};
    n.rotation = {quat_w[i], quat_x[i], quat_y[i], quat_z[i]};
    n.opacity = opacity[i];
    n.color = {color_r[i], color_g[i], color_b[i]};
    if (i < levels.size()) {
        n.level = levels[i];
    } else {
        auto it = std::upper_bound(level_offsets.begin(), level_offsets.end(), i);
        n.level = std::uint32_t(it - level_offsets.begin()) - 1;
    }
    n.parent = parent[i];
    n.leaf = leaf[i] != 0;
    return n;
}

void LoDTree::rebuild_derived() {
    const std::size_t n = node_count();
    levels.assign(n, 0);
    for (std::size_t l = 0; l < level_count(); ++l)
        for (std::uint32_t i = level_begin(l); i < level_end(l); ++i)
            levels[i] = std::uint32_t(l);

    child_offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (parent[i] != kRootParent) ++child_offsets[parent[i] + 1];
    for (std::size_t i = 1; i <= n; ++i) child_offsets[i] += child_offsets[i - 1];
    child_indices.resize(child_offsets[n]);
    std::vector<std::uint32_t> cursor(child_offsets.begin(), child_offsets.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
        if (parent[i] != kRootParent)
            child_indices[cursor[parent[i]]++] = NodeIndex(i);
}

namespace {

bool finite3(float a, float b, float c) {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c);
}

}  // namespace

std::vector<Violation> validate_tree(const LoDTree& t) {
    std::vector<Violation> out;
    const std::size_t n = t.node_count();
    auto tree_rule = [&](const std::string& rule) { out.push_back({kRootParent, rule}); };

    const std::size_t sizes[] = {
        t.mean_y.size(),  t.mean_z.size(),  t.scale_x.size(), t.scale_y.size(),
        t.scale_z.size(), t.quat_w.size(),  t.quat_x.size(),  t.quat_y.size(),
        t.quat_z.size(),  t.opacity.size(), t.color_r.size(), t.color_g.size(),
        t.color_b.size(), t.parent.size(),  t.leaf.size()};
    for (std::size_t s : sizes)
        if (s != n) {
            tree_rule("field arrays equal length");
            return out;  // per-node checks would read out of bounds
        }

    if (!(t.shrink_factor > 0.0f && t.shrink_factor < 1.0f))
        tree_rule("shrink_factor in (0,1)");

    bool offsets_ok = !t.level_offsets.empty() && t.level_offsets[0] == 0;
    for (std::size_t l = 0; offsets_ok && l < t.level_count(); ++l)
        offsets_ok = t.level_begin(l) <= t.level_end(l) && t.level_end(l) <= n;
    if (n > 0 && !offsets_ok) {
        tree_rule("level_offsets monotone in [0, node_count]");
        return out;  // node levels are undefined past this point
    }
    if (n == 0) {
        if (!t.level_offsets.empty()) tree_rule("level_offsets empty for empty tree");
        return out;
    }

    std::vector<std::uint32_t> level_of(n);
    for (std::size_t l = 0; l < t.level_count(); ++l)
        for (std::uint32_t i = t.level_begin(l); i < t.level_end(l); ++i)
            level_of[i] = std::uint32_t(l);

    std::vector<std::uint8_t> has_child(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (t.parent[i] != kRootParent && t.parent[i] < n) has_child[t.parent[i]] = 1;

    for (std::size_t i = 0; i < n; ++i) {
        const NodeIndex idx = NodeIndex(i);
        if (!finite3(t.mean_x[i], t.mean_y[i], t.mean_z[i]) ||
            !finite3(t.scale_x[i], t.scale_y[i], t.scale_z[i]) ||
            !finite3(t.quat_x[i], t.quat_y[i], t.quat_z[i]) ||
            !std::isfinite(t.quat_w[i]) || !std::isfinite(t.opacity[i]) ||
            !finite3(t.color_r[i], t.color_g[i], t.color_b[i])) {
            out.push_back({idx, "all fields finite"});
            continue;
        }
        const double qn = std::sqrt(double(t.quat_w[i]) * t.quat_w[i] +
                                    double(t.quat_x[i]) * t.quat_x[i] +
                                    double(t.quat_y[i]) * t.quat_y[i] +
                                    double(t.quat_z[i]) * t.quat_z[i]);
        if (std::abs(qn - 1.0) > 1e-6) out.push_back({idx, "unit quaternion"});
        if (!(t.scale_x[i] > 0 && t.scale_y[i] > 0 && t.scale_z[i] > 0))
            out.push_back({idx, "scale > 0"});
        if (!(t.opacity[i] > 0 && t.opacity[i] <= 1))
            out.push_back({idx, "opacity in (0,1]"});
        if (!(t.color_r[i] >= 0 && t.color_r[i] <= 1 && t.color_g[i] >= 0 &&
              t.color_g[i] <= 1 && t.color_b[i] >= 0 && t.color_b[i] <= 1))
            out.push_back({idx, "color in [0,1]"});

        const NodeIndex p = t.parent[i];
        if (level_of[i] == 0) {
            if (p != kRootParent) out.push_back({idx, "level-0 parent is ROOT"});
        } else if (p == kRootParent || p >= n) {
            out.push_back({idx, "parent index in range"});
        } else if (level_of[p] + 1 != level_of[i]) {
            out.push_back({idx, "parent level == level - 1"});
        }

        const bool is_leaf = t.leaf[i] != 0;
        if (is_leaf == bool(has_child[i])) out.push_back({idx, "leaf iff childless"});
    }
    return out;
}

std::vector<std::string> validate_camera(const Camera& c) {
    std::vector<std::string> out;
    if (c.width < 1 || c.height < 1) out.push_back("width, height >= 1");
    if (!(c.fx > 0) || !(c.fy > 0)) out.push_back("fx, fy > 0");
    if (!std::isfinite(c.cx) || !std::isfinite(c.cy)) out.push_back("cx, cy finite");
    if (!(c.near > 0 && c.near < c.far)) out.push_back("0 < near < far");

    const auto& r = c.world_to_cam_rotation;
    bool finite = true;
    for (double v : r) finite = finite && std::isfinite(v);
    for (double v : c.world_to_cam_translation) finite = finite && std::isfinite(v);
    if (!finite) {
        out.push_back("rotation, translation finite");
        return out;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double dot = 0;
            for (int k = 0; k < 3; ++k) dot += r[3 * i + k] * r[3 * j + k];
            if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-6) {
                out.push_back("rotation orthonormal");
                i = j = 3;
            }
        }
    return out;
}

namespace {

[[noreturn]] void throw_violations(const std::string& what, const std::string& detail) {
    throw ValidationError(what + ": " + detail);
}

}  // namespace

void require_valid(const LoDTree& tree) {
    auto v = validate_tree(tree);
    if (v.empty()) return;
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size() && i < 8; ++i) {
        if (i) ss << "; ";
        if (v[i].node == kRootParent)
            ss << "tree: " << v[i].rule;
        else
            ss << "node " << v[i].node << ": " << v[i].rule;
    }
    if (v.size() > 8) ss << "; +" << (v.size() - 8) << " more";
    throw_violations("invalid tree", ss.str());
}

void require_valid(const Camera& cam) {
    auto v = validate_camera(cam);
    if (v.empty()) return;
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) ss << "; ";
        ss << v[i];
    }
    throw_violations("invalid camera", ss.str());
}

}  // namespace lodgs
