// SPDX-License-Identifier: Apache-2.0
#include "lodgs/rasterizer.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>

#include "lodgs/worker_pool.hpp"

namespace lodgs {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

const char* filter_mode_name(FilterMode m) {
    return m == FilterMode::serial ? "serial" : "parallel";
}

const char* shrink_mode_name(ShrinkMode::Kind k) {
    switch (k) {
        case ShrinkMode::Kind::three_sigma: return "three_sigma";
        case ShrinkMode::Kind::fixed: return "fixed";
        case ShrinkMode::Kind::adaptive: return "adaptive";
    }
    return "?";
}

double effective_radius(const Projected2D& proj, float opacity,
                        const ShrinkMode& mode) {
    const double three_sigma = 3.0 * proj.sigma_max;
    if (mode.kind == ShrinkMode::Kind::three_sigma) return three_sigma;
    if (!(mode.tau > 0.0 && mode.tau < 1.0))
        throw ValidationError("shrink mode: tau in (0,1)");
    const double a0 = double(opacity);
    if (a0 <= mode.tau) return 0.0;
    const double r = proj.sigma_max * std::sqrt(2.0 * std::log(a0 / mode.tau));
    return std::min(r, three_sigma);
}

BlendList prepare_gaussians(const LoDTree& tree, const Camera& cam,
                            const std::vector<NodeIndex>& selected,
                            const ShrinkMode& mode) {
    const CameraGeom geom = CameraGeom::make(cam);
    BlendList out;
    out.mean_x.reserve(selected.size());
    for (NodeIndex idx : selected) {
        const GaussianNode n = tree.node(idx);
        const auto p = project(geom, n, idx);
        if (!p) continue;  // selected leaf closer than the near plane
        const double r = effective_radius(*p, n.opacity, mode);
        out.mean_x.push_back(p->mean2d_x);
        out.mean_y.push_back(p->mean2d_y);
        out.conic_a.push_back(p->conic_a);
        out.conic_b.push_back(p->conic_b);
        out.conic_c.push_back(p->conic_c);
        out.opacity.push_back(double(n.opacity));
        out.col_r.push_back(double(n.color.x));
        out.col_g.push_back(double(n.color.y));
        out.col_b.push_back(double(n.color.z));
        out.radius.push_back(r);
        out.depth.push_back(float(p->depth));
        out.node.push_back(idx);
    }
    return out;
}

std::vector<TilePair> bin_to_tiles(const BlendList& list, const TileGrid& grid,
                                   int width, int height) {
    std::vector<TilePair> pairs;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const double r = list.radius[i];
        if (!(r > 0.0)) continue;
        const double mx = list.mean_x[i], my = list.mean_y[i];
        int tx0 = int(std::floor((mx - r) / kTileW));
        int tx1 = int(std::floor((mx + r) / kTileW));
        int ty0 = int(std::floor((my - r) / kTileH));
        int ty1 = int(std::floor((my + r) / kTileH));
        tx0 = std::max(tx0, 0);
        ty0 = std::max(ty0, 0);
        tx1 = std::min(tx1, grid.tiles_x - 1);
        ty1 = std::min(ty1, grid.tiles_y - 1);
        for (int ty = ty0; ty <= ty1; ++ty)
            for (int tx = tx0; tx <= tx1; ++tx)
                pairs.push_back({grid.tile_id(tx, ty), list.depth[i],
                                 std::uint32_t(i)});
    }
    (void)width;
    (void)height;
    return pairs;
}

void sort_pairs(std::vector<TilePair>& pairs) {
    const std::size_t n = pairs.size();
    if (n < 2) return;
    std::vector<std::uint64_t> keys(n), keys_tmp(n);
    std::vector<std::uint32_t> order(n), order_tmp(n);
    for (std::size_t i = 0; i < n; ++i) {
        keys[i] = (std::uint64_t(pairs[i].tile) << 32) |
                  std::bit_cast<std::uint32_t>(pairs[i].depth);
        order[i] = std::uint32_t(i);
    }
    // LSD radix, one byte per pass; stability gives the gaussian-index
    // tie-break because binning emits in index order.
    for (int pass = 0; pass < 8; ++pass) {
        const int shift = pass * 8;
        std::size_t count[256] = {};
        for (std::size_t i = 0; i < n; ++i)
            ++count[(keys[i] >> shift) & 0xff];
        if (count[(keys[0] >> shift) & 0xff] == n) continue;
        std::size_t sum = 0;
        for (int b = 0; b < 256; ++b) {
            const std::size_t c = count[b];
            count[b] = sum;
            sum += c;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t dst = count[(keys[i] >> shift) & 0xff]++;
            keys_tmp[dst] = keys[i];
            order_tmp[dst] = order[i];
        }
        keys.swap(keys_tmp);
        order.swap(order_tmp);
    }
    std::vector<TilePair> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = pairs[order[i]];
    pairs.swap(sorted);
}

Image alpha_blend(const std::vector<TilePair>& sorted, const BlendList& list,
                  const TileGrid& grid, int width, int height, unsigned workers,
                  std::vector<double>* kpc_out) {
    Image img = Image::black(width, height);
    const std::size_t n_tile = std::size_t(grid.n_tile());
    std::vector<std::size_t> offsets(n_tile + 1, 0);
    for (const TilePair& p : sorted) ++offsets[p.tile + 1];
    for (std::size_t t = 0; t < n_tile; ++t) offsets[t + 1] += offsets[t];
    if (kpc_out) kpc_out->assign(sorted.size(), 0.0);

    const BlendGaussians view = list.view();
    const KernelTable& k = kernels();
    WorkerPool& pool = pool_for(workers);
    pool.run(0, n_tile, [&](std::size_t lo, std::size_t hi, unsigned) {
        for (std::size_t t = lo; t < hi; ++t) {
            const std::size_t begin = offsets[t], end = offsets[t + 1];
            if (begin == end) continue;
            const int tx = int(t) % grid.tiles_x, ty = int(t) / grid.tiles_x;
            TileSpan span;
            span.x0 = tx * kTileW;
            span.y0 = ty * kTileH;
            span.w = std::min(kTileW, width - span.x0);
            span.h = std::min(kTileH, height - span.y0);
            k.blend(view, sorted.data() + begin, end - begin, span, width,
                    img.rgb.data(), kpc_out ? kpc_out->data() + begin : nullptr);
        }
    });
    return img;
}

RenderOutput render(const LoDTree& tree, const Camera& cam,
                    const FilterConfig& filter, const ShrinkMode& mode,
                    const RenderOptions& opts) {
    require_valid(tree);
    require_valid(cam);
    if (mode.kind != ShrinkMode::Kind::three_sigma &&
        !(mode.tau > 0.0 && mode.tau < 1.0))
        throw ValidationError("render: shrink tau in (0,1); adaptive needs "
                              "calibration first");

    FilterConfig fc = filter;
    fc.worker_count = opts.worker_count;
    RenderOutput out;

    FilterResult fr = opts.filter_mode == FilterMode::serial
                          ? filter_serial(tree, cam, fc)
                          : filter_parallel(tree, cam, fc);
    out.stats.n_selected = fr.selected.size();
    out.stats.filter_passes = fr.passes;
    out.stats.filter_barriers = fr.barriers;
    out.stats.t_calc_ms = fr.calc_ms;
    out.stats.t_sync_ms = fr.sync_ms;

    auto t0 = Clock::now();
    BlendList list = prepare_gaussians(tree, cam, fr.selected, mode);
    const TileGrid grid = TileGrid::make(int(cam.width), int(cam.height));
    std::vector<TilePair> pairs = bin_to_tiles(list, grid, int(cam.width),
                                               int(cam.height));
    out.stats.t_prepr_ms = ms_since(t0);
    out.stats.n_pairs = pairs.size();

    t0 = Clock::now();
    sort_pairs(pairs);
    out.stats.t_sort_ms = ms_since(t0);

    t0 = Clock::now();
    out.image = alpha_blend(pairs, list, grid, int(cam.width), int(cam.height),
                            opts.worker_count,
                            opts.collect_kpc ? &out.kpc : nullptr);
    out.stats.t_alpha_ms = ms_since(t0);

    if (opts.collect_kpc) {
        out.pairs = std::move(pairs);
        out.gaussians = std::move(list);
    }
    return out;
}

}  // namespace lodgs
