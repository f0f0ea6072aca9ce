// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lodgs/metrics.hpp"
#include "lodgs/rasterizer.hpp"

namespace lodgs {

// Stage times in milliseconds, rounded to 3 decimals at row creation so the
// CSV and JSON emit the same values.
struct FrameRow {
    std::uint32_t frame = 0;
    std::string filter_mode;
    std::string shrink_mode;
    double t_calcu = 0, t_synch = 0, t_prepr = 0, t_sort = 0, t_alpha = 0;
    double t_total = 0;  // sum of the five stage times
    std::uint64_t n_pairs = 0;
    std::uint64_t n_low = 0;  // pairs with kpc < 0.01
    int barriers = 0;
};

struct AggregateRow {
    std::string filter_mode;
    std::string shrink_mode;
    double fps = 0;         // frame count / cumulative t_total
    double mean_pairs = 0;  // mean n_pairs
    double psnr_vs_ref = 0, ssim_vs_ref = 0;  // vs the first combination
    int barriers = 0;                         // max over the combo's frames
    Histogram histogram;                      // kpc bins over all frames
};

struct BenchReport {
    std::vector<FrameRow> frames;
    std::vector<AggregateRow> aggregates;
};

struct BenchCombo {
    FilterMode filter = FilterMode::parallel;
    ShrinkMode shrink = ShrinkMode::three_sigma();
};

// "3sigma" / "fixed" / "adaptive" — the flag vocabulary, used in reports.
std::string shrink_label(const ShrinkMode& mode);

double round_ms(double ms);
FrameRow make_frame_row(std::uint32_t frame, FilterMode filter,
                        const ShrinkMode& shrink, const RenderStats& stats,
                        std::uint64_t n_low);

std::string bench_csv(const BenchReport& report);
std::string bench_json(const BenchReport& report);

// Renders every combination over the frame list; the first combination is
// the quality reference.
BenchReport run_bench(const LoDTree& tree, const std::vector<Camera>& frames,
                      const std::vector<BenchCombo>& combos,
                      const FilterConfig& filter_cfg);

}  // namespace lodgs
