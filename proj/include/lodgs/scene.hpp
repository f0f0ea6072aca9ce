// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lodgs/core.hpp"

namespace lodgs {

// Covariance stays factored as (scale, rotation); positive-semidefiniteness
// is structural and never validated numerically.
struct GaussianNode {
    Vec3f mean{};
    Vec3f scale{};
    Quatf rotation{};
    float opacity = 0.0f;
    Vec3f color{};
    std::uint32_t level = 0;
    NodeIndex parent = kRootParent;
    bool leaf = false;
};

// Level-major node arena. Arrays are struct-of-arrays so level ranges can be
// swept contiguously; `levels` and the child adjacency are derived and must
// be rebuilt (rebuild_derived) after the authoritative fields change.
struct LoDTree {
    std::vector<float> mean_x, mean_y, mean_z;
    std::vector<float> scale_x, scale_y, scale_z;
    std::vector<float> quat_w, quat_x, quat_y, quat_z;
    std::vector<float> opacity;
    std::vector<float> color_r, color_g, color_b;
    std::vector<NodeIndex> parent;
    std::vector<std::uint8_t> leaf;
    // One entry per level: the index of its first node. Level i spans
    // [level_offsets[i], level_end(i)).
    std::vector<std::uint32_t> level_offsets;
    float shrink_factor = 0.5f;

    // Derived, not serialized.
    std::vector<std::uint32_t> levels;
    std::vector<std::uint32_t> child_offsets;  // node_count()+1 entries
    std::vector<NodeIndex> child_indices;

    std::size_t node_count() const { return mean_x.size(); }
    std::size_t level_count() const { return level_offsets.size(); }
    std::uint32_t depth() const {
        return level_offsets.empty() ? 0 : std::uint32_t(level_offsets.size() - 1);
    }

    std::uint32_t level_begin(std::size_t l) const { return level_offsets[l]; }
    std::uint32_t level_end(std::size_t l) const {
        return l + 1 < level_offsets.size() ? level_offsets[l + 1]
                                            : std::uint32_t(node_count());
    }

    void reserve(std::size_t n);
    void push_node(const GaussianNode& n);
    GaussianNode node(NodeIndex i) const;

    const NodeIndex* children_begin(NodeIndex i) const {
        return child_indices.data() + child_offsets[i];
    }
    const NodeIndex* children_end(NodeIndex i) const {
        return child_indices.data() + child_offsets[i + 1];
    }

    // Rebuilds `levels` from level_offsets and the child adjacency from
    // parent links. Requires level_offsets to be structurally sane; call
    // validate_tree first on untrusted input.
    void rebuild_derived();
};

struct Camera {
    std::uint32_t width = 0, height = 0;
    double fx = 0, fy = 0, cx = 0, cy = 0;
    std::array<double, 9> world_to_cam_rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major
    std::array<double, 3> world_to_cam_translation{0, 0, 0};
    double near = 0.01, far = 1000.0;
};

struct Violation {
    NodeIndex node;  // kRootParent for tree-wide rules
    std::string rule;
};

std::vector<Violation> validate_tree(const LoDTree& tree);
std::vector<std::string> validate_camera(const Camera& cam);

// Throws ValidationError listing the first violations if any.
void require_valid(const LoDTree& tree);
void require_valid(const Camera& cam);

}  // namespace lodgs
