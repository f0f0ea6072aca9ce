// SPDX-License-Identifier: Apache-2.0
#include "lodgs/filter.hpp"

#include "lodgs/kernels.hpp"
#include "lodgs/mark_core.hpp"
#include "lodgs/worker_pool.hpp"

namespace lodgs {

namespace {

// Inputs are assumed valid (the load/render boundaries enforce that); only
// the config is cheap enough to check on every call.
void check(const LoDTree&, const Camera&, const FilterConfig& config) {
    if (!(config.tau_r > 0)) throw ValidationError("filter config: tau_r > 0");
    if (config.worker_count < 1)
        throw ValidationError("filter config: worker_count >= 1");
}

bool ancestor_disqualifies(const LoDTree& t, NodeIndex n,
                           const std::uint8_t* qpass) {
    for (NodeIndex a = t.parent[n]; a != kRootParent; a = t.parent[a])
        if (qpass[a] && !t.leaf[a]) return true;
    return false;
}

}  // namespace

FilterResult filter_oracle(const LoDTree& tree, const Camera& cam,
                           const FilterConfig& config) {
    check(tree, cam, config);
    const CameraGeom geom = CameraGeom::make(cam);
    const NodeArrays arrays = NodeArrays::from(tree);
    const std::size_t n = tree.node_count();

    std::vector<std::uint8_t> vis(n), qpass(n);
    for (std::size_t i = 0; i < n; ++i) {
        const MarkOut o = mark_core(
            geom, arrays.mean_x[i], arrays.mean_y[i], arrays.mean_z[i],
            arrays.scale_x[i], arrays.scale_y[i], arrays.scale_z[i],
            arrays.quat_w[i], arrays.quat_x[i], arrays.quat_y[i],
            arrays.quat_z[i], config.tau_r);
        vis[i] = o.vis;
        qpass[i] = o.qpass;
    }

    FilterResult r;
    r.passes = 1;
    r.barriers = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const NodeIndex idx = NodeIndex(i);
        if (!vis[i]) continue;
        if (!(qpass[i] || tree.leaf[i])) continue;
        if (ancestor_disqualifies(tree, idx, qpass.data())) continue;
        r.selected.push_back(idx);
    }
    return r;
}

FilterResult filter_serial(const LoDTree& tree, const Camera& cam,
                           const FilterConfig& config) {
    check(tree, cam, config);
    const CameraGeom geom = CameraGeom::make(cam);
    const NodeArrays na = NodeArrays::from(tree);
    WorkerPool& pool = pool_for(config.worker_count);

    FilterResult r;
    std::vector<NodeIndex> active;
    active.reserve(tree.level_end(0));
    for (NodeIndex i = 0; i < tree.level_end(0); ++i) active.push_back(i);

    std::vector<std::uint8_t> vis, qpass;
    std::vector<NodeIndex> next;
    for (std::size_t level = 0; level < tree.level_count() && !active.empty();
         ++level) {
        ++r.passes;
        vis.resize(active.size());
        qpass.resize(active.size());
        // Gathered marks: the active list is not contiguous in the arena, so
        // this stays scalar per node.
        const auto stats = pool.run(
            0, active.size(), [&](std::size_t lo, std::size_t hi, unsigned) {
                for (std::size_t i = lo; i < hi; ++i) {
                    const NodeIndex idx = active[i];
                    const MarkOut o = mark_core(
                        geom, na.mean_x[idx], na.mean_y[idx], na.mean_z[idx],
                        na.scale_x[idx], na.scale_y[idx], na.scale_z[idx],
                        na.quat_w[idx], na.quat_x[idx], na.quat_y[idx],
                        na.quat_z[idx], config.tau_r);
                    vis[i] = o.vis;
                    qpass[i] = o.qpass;
                }
            });
        ++r.barriers;
        r.calc_ms += stats.calc_ms;
        r.sync_ms += stats.wall_ms - stats.calc_ms;

        next.clear();
        for (std::size_t i = 0; i < active.size(); ++i) {
            const NodeIndex idx = active[i];
            if (!vis[i]) continue;
            if (qpass[i] || tree.leaf[idx]) {
                r.selected.push_back(idx);
            } else {
                for (const NodeIndex* c = tree.children_begin(idx);
                     c != tree.children_end(idx); ++c)
                    next.push_back(*c);
            }
        }
        active.swap(next);
    }
    return r;
}

FilterResult filter_parallel(const LoDTree& tree, const Camera& cam,
                             const FilterConfig& config) {
    check(tree, cam, config);
    const CameraGeom geom = CameraGeom::make(cam);
    const NodeArrays na = NodeArrays::from(tree);
    const std::size_t n = tree.node_count();
    WorkerPool& pool = pool_for(config.worker_count);
    const KernelTable& k = kernels();

    FilterResult r;
    std::vector<std::uint8_t> vis(n), qpass(n), keep(n);

    // Pass 1: flat contiguous marks, vector kernel when available.
    auto s1 = pool.run(0, n, [&](std::size_t lo, std::size_t hi, unsigned) {
        k.mark(geom, na, lo, hi, config.tau_r, vis.data(), qpass.data(), nullptr);
    });
    ++r.barriers;

    // Pass 2: candidates walk their parent chains against the marks.
    auto s2 = pool.run(0, n, [&](std::size_t lo, std::size_t hi, unsigned) {
        for (std::size_t i = lo; i < hi; ++i) {
            const NodeIndex idx = NodeIndex(i);
            const bool candidate = vis[i] && (qpass[i] || tree.leaf[i]);
            keep[i] = candidate &&
                      !ancestor_disqualifies(tree, idx, qpass.data());
        }
    });
    ++r.barriers;
    r.passes = 2;
    r.calc_ms = s1.calc_ms + s2.calc_ms;
    r.sync_ms = (s1.wall_ms - s1.calc_ms) + (s2.wall_ms - s2.calc_ms);

    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) r.selected.push_back(NodeIndex(i));
    return r;
}

}  // namespace lodgs
