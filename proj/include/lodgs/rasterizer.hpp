// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lodgs/filter.hpp"
#include "lodgs/image.hpp"
#include "lodgs/kernels.hpp"
#include "lodgs/projection.hpp"
#include "lodgs/scene.hpp"
#include "lodgs/tiles.hpp"

namespace lodgs {

struct ShrinkMode {
    enum class Kind { three_sigma, fixed, adaptive };
    Kind kind = Kind::three_sigma;
    double tau = 0.0;  // opacity threshold for fixed/adaptive

    static ShrinkMode three_sigma() { return {Kind::three_sigma, 0.0}; }
    static ShrinkMode fixed() { return {Kind::fixed, 1.0 / 255.0}; }
    static ShrinkMode adaptive(double tau) { return {Kind::adaptive, tau}; }
};

const char* shrink_mode_name(ShrinkMode::Kind k);

// Footprint radius in pixels for binning. THREE_SIGMA keeps 3 sigma; the
// threshold modes shrink to where opacity decays to tau, never past 3 sigma,
// and cull outright when the peak opacity is already below tau.
double effective_radius(const Projected2D& proj, float opacity,
                        const ShrinkMode& mode);

// Screen-space Gaussians compacted for blending, indexed by
// TilePair::gaussian.
struct BlendList {
    std::vector<double> mean_x, mean_y;
    std::vector<double> conic_a, conic_b, conic_c;
    std::vector<double> opacity;
    std::vector<double> col_r, col_g, col_b;
    std::vector<double> radius;  // effective (possibly shrunk) extent
    std::vector<float> depth;
    std::vector<NodeIndex> node;

    std::size_t size() const { return mean_x.size(); }
    BlendGaussians view() const {
        return {mean_x.data(),  mean_y.data(),  conic_a.data(),
                conic_b.data(), conic_c.data(), opacity.data(),
                col_r.data(),   col_g.data(),   col_b.data()};
    }
};

// Projects the selected nodes (dropping any that fail projection) and applies
// the shrink mode.
BlendList prepare_gaussians(const LoDTree& tree, const Camera& cam,
                            const std::vector<NodeIndex>& selected,
                            const ShrinkMode& mode);

// One pair per tile overlapped by the axis-aligned square of half-width
// radius around the mean, clipped to the image; radius 0 emits nothing.
std::vector<TilePair> bin_to_tiles(const BlendList& list, const TileGrid& grid,
                                   int width, int height);

// (tile asc, depth asc, gaussian asc); radix on a packed key, stable.
void sort_pairs(std::vector<TilePair>& pairs);

// Front-to-back blending of sorted pairs, parallel over tiles. kpc_out, when
// non-null, receives one entry per pair.
Image alpha_blend(const std::vector<TilePair>& sorted, const BlendList& list,
                  const TileGrid& grid, int width, int height, unsigned workers,
                  std::vector<double>* kpc_out = nullptr);

struct RenderStats {
    std::size_t n_selected = 0;
    std::uint64_t n_pairs = 0;
    int filter_passes = 0;
    int filter_barriers = 0;
    double t_calc_ms = 0, t_sync_ms = 0;   // filter split
    double t_prepr_ms = 0, t_sort_ms = 0, t_alpha_ms = 0;

    double total_ms() const {
        return t_calc_ms + t_sync_ms + t_prepr_ms + t_sort_ms + t_alpha_ms;
    }
};

struct RenderOutput {
    Image image;
    RenderStats stats;
    // Populated only when RenderOptions::collect_kpc: the sorted pairs and
    // each pair's accumulated alpha * T over its tile.
    std::vector<TilePair> pairs;
    std::vector<double> kpc;
    BlendList gaussians;
};

enum class FilterMode { serial, parallel };

const char* filter_mode_name(FilterMode m);

struct RenderOptions {
    unsigned worker_count = 1;
    bool collect_kpc = false;
    FilterMode filter_mode = FilterMode::parallel;
};

RenderOutput render(const LoDTree& tree, const Camera& cam,
                    const FilterConfig& filter, const ShrinkMode& mode,
                    const RenderOptions& opts = {});

}  // namespace lodgs
