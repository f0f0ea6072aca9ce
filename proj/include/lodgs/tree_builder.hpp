// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lodgs/scene.hpp"

namespace lodgs {

struct TreeBuildConfig {
    std::uint32_t depth = 3;          // L >= 1
    float shrink_factor = 0.5f;       // gamma in (0, 0.8]
    std::uint32_t children_per_node = 8;  // in {1..8}
    std::uint64_t seed = 0;           // child-subset selection when < 8 children
};

struct SyntheticSceneSpec {
    std::uint32_t nx = 8, ny = 8;
    float spacing = 2.0f;
    float scale_min = 0.2f, scale_max = 0.6f;
    float opacity_min = 0.3f, opacity_max = 0.9f;
    std::vector<Vec3f> palette = {{0.9f, 0.2f, 0.2f}, {0.2f, 0.9f, 0.2f},
                                  {0.2f, 0.2f, 0.9f}, {0.9f, 0.9f, 0.2f}};
    std::uint64_t seed = 0;
    std::uint32_t congestion = 1;  // co-located roots per grid cell
};

// Children sit at the 8 oriented corner offsets R(q)·(±s_x/2, ±s_y/2, ±s_z/2),
// ordered x-fastest from (-,-,-) to (+,+,+). With children_per_node < 8 a
// seeded per-parent subset is used, kept in ascending corner order.
LoDTree build_tree(const std::vector<GaussianNode>& roots, const TreeBuildConfig& config);

// Deterministic function of the seed; identical specs give bit-identical nodes.
std::vector<GaussianNode> generate_synthetic_scene(const SyntheticSceneSpec& spec);

// Direct parent first, level-0 ancestor last; empty for roots.
std::vector<NodeIndex> ancestor_chain(const LoDTree& tree, NodeIndex node);

// Corner offset k in the parent's local frame, before rotation.
Vec3d corner_offset(std::uint32_t k, float sx, float sy, float sz);

}  // namespace lodgs
