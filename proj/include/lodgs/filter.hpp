// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lodgs/scene.hpp"

namespace lodgs {

struct FilterConfig {
    double tau_r = 3.0;        // pixel radius threshold
    unsigned worker_count = 1;
};

struct FilterResult {
    std::vector<NodeIndex> selected;  // strictly increasing
    int passes = 0;
    int barriers = 0;
    double calc_ms = 0.0;
    double sync_ms = 0.0;
};

// Selection, shared by all three implementations:
//   Q(n)     = visible(n) && projectable(n) && radius(n) <= tau_r
//   SELECTED = visible(n) && (Q(n) || leaf(n))
//              && no ancestor a with (internal(a) && Q(a))
// visible() is the conservative sphere-frustum test; projectable() requires
// the center at or beyond the near plane, without which the screen radius
// does not exist.

// Literal per-node evaluation with full ancestor walks; the ground truth.
FilterResult filter_oracle(const LoDTree& tree, const Camera& cam,
                           const FilterConfig& config);

// Level-wise descent with an active set and one barrier per level.
FilterResult filter_serial(const LoDTree& tree, const Camera& cam,
                           const FilterConfig& config);

// Two flat passes over all nodes (mark, then ancestor check); two barriers
// no matter how deep the tree is.
FilterResult filter_parallel(const LoDTree& tree, const Camera& cam,
                             const FilterConfig& config);

}  // namespace lodgs
