// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lodgs/filter.hpp"
#include "lodgs/image.hpp"
#include "lodgs/rasterizer.hpp"
#include "lodgs/scene.hpp"

namespace lodgs {

// One (gaussian, tile) record with its composited contribution:
// kpc = sum over the tile's pixels of alpha*T at the moment the gaussian
// was blended. Skipped and post-termination samples contribute 0, so
// kpc <= tile area.
struct PairContribution {
    TilePair pair;
    double kpc = 0.0;
};

struct TileStats {
    std::uint32_t tile = 0;
    std::uint32_t n_gs = 0;  // contributing gaussians; always >= 1
    double gtc = 0.0;        // mean kpc of the tile's pairs
};

struct Histogram {
    // kpc bins: [0,0.01) [0.01,0.05) [0.05,0.2) [0.2,1) [1,inf)
    static constexpr std::array<double, 4> kEdges = {0.01, 0.05, 0.2, 1.0};
    std::array<std::uint64_t, 5> bins = {};

    std::uint64_t n_low() const { return bins[0]; }
    std::uint64_t total() const;
};

struct CalibrationReport {
    std::vector<double> per_view;  // view mean GTC, empty views excluded
    double scene_mean = 0.0;
    double lambda_g = 0.0;
    double tau = 0.0;  // lambda_g / scene_mean
    std::uint32_t n_views = 0;
    Histogram histogram;
};

struct ViewInstrumentation {
    RenderOutput out;
    std::vector<PairContribution> contributions;
    std::vector<TileStats> tiles;  // tiles with n_gs >= 1 only
    double view_gtc = 0.0;         // NaN when no tile has pairs
};

// Pure aggregation pieces, shared with tests that feed literal kpc values.
std::vector<TileStats> tile_stats_from(const std::vector<TilePair>& sorted,
                                       const std::vector<double>& kpc);
double view_gtc(const std::vector<TileStats>& tiles);
Histogram redundancy_histogram(const std::vector<double>& kpcs);
CalibrationReport make_report(const std::vector<double>& per_view,
                              double lambda_g, const Histogram& hist);

// Pre-rendering pass: renders with three-sigma extents while recording the
// kpc of every surviving pair.
ViewInstrumentation instrumented_render(const LoDTree& tree, const Camera& cam,
                                        const FilterConfig& filter);

CalibrationReport calibrate(const LoDTree& tree,
                            const std::vector<Camera>& views, double lambda_g,
                            const FilterConfig& filter = {});

std::string report_to_json(const CalibrationReport& r);

double psnr(const Image& a, const Image& b);  // +inf for identical images
double ssim(const Image& a, const Image& b);

// "inf" for infinities, else fixed 4-decimal text; used by reports.
std::string format_metric(double v);

}  // namespace lodgs
