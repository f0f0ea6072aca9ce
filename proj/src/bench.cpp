// SPDX-License-Identifier: Apache-2.0
#include "lodgs/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

namespace lodgs {

namespace {

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string shrink_label(const ShrinkMode& mode) {
    switch (mode.kind) {
        case ShrinkMode::Kind::three_sigma: return "3sigma";
        case ShrinkMode::Kind::fixed: return "fixed";
        case ShrinkMode::Kind::adaptive: return "adaptive";
    }
    return "?";
}

double round_ms(double ms) { return std::round(ms * 1000.0) / 1000.0; }

FrameRow make_frame_row(std::uint32_t frame, FilterMode filter,
                        const ShrinkMode& shrink, const RenderStats& stats,
                        std::uint64_t n_low) {
    FrameRow r;
    r.frame = frame;
    r.filter_mode = filter_mode_name(filter);
    r.shrink_mode = shrink_label(shrink);
    r.t_calcu = round_ms(stats.t_calc_ms);
    r.t_synch = round_ms(stats.t_sync_ms);
    r.t_prepr = round_ms(stats.t_prepr_ms);
    r.t_sort = round_ms(stats.t_sort_ms);
    r.t_alpha = round_ms(stats.t_alpha_ms);
    r.t_total = round_ms(r.t_calcu + r.t_synch + r.t_prepr + r.t_sort +
                         r.t_alpha);
    r.n_pairs = stats.n_pairs;
    r.n_low = n_low;
    r.barriers = stats.filter_barriers;
    return r;
}

std::string bench_csv(const BenchReport& report) {
    std::string out =
        "frame,filter_mode,shrink_mode,T_calcu,T_synch,T_prepr,T_sort,"
        "T_alpha,T_total,N_P,N_low,barriers\n";
    for (const FrameRow& r : report.frames) {
        out += std::to_string(r.frame) + ',' + r.filter_mode + ',' +
               r.shrink_mode + ',' + fmt3(r.t_calcu) + ',' + fmt3(r.t_synch) +
               ',' + fmt3(r.t_prepr) + ',' + fmt3(r.t_sort) + ',' +
               fmt3(r.t_alpha) + ',' + fmt3(r.t_total) + ',' +
               std::to_string(r.n_pairs) + ',' + std::to_string(r.n_low) +
               ',' + std::to_string(r.barriers) + '\n';
    }
    out +=
        "\nfilter_mode,shrink_mode,fps,mean_N_P,psnr_vs_ref,ssim_vs_ref,"
        "barriers,hist_lt_0p01,hist_lt_0p05,hist_lt_0p2,hist_lt_1,hist_ge_1\n";
    for (const AggregateRow& a : report.aggregates) {
        out += a.filter_mode + ',' + a.shrink_mode + ',' + fmt3(a.fps) + ',' +
               fmt3(a.mean_pairs) + ',' + format_metric(a.psnr_vs_ref) + ',' +
               format_metric(a.ssim_vs_ref) + ',' + std::to_string(a.barriers);
        for (auto b : a.histogram.bins) out += ',' + std::to_string(b);
        out += '\n';
    }
    return out;
}

std::string bench_json(const BenchReport& report) {
    nlohmann::ordered_json j;
    j["frames"] = nlohmann::ordered_json::array();
    for (const FrameRow& r : report.frames) {
        nlohmann::ordered_json f;
        f["frame"] = r.frame;
        f["filter_mode"] = r.filter_mode;
        f["shrink_mode"] = r.shrink_mode;
        f["T_calcu"] = r.t_calcu;
        f["T_synch"] = r.t_synch;
        f["T_prepr"] = r.t_prepr;
        f["T_sort"] = r.t_sort;
        f["T_alpha"] = r.t_alpha;
        f["T_total"] = r.t_total;
        f["N_P"] = r.n_pairs;
        f["N_low"] = r.n_low;
        f["barriers"] = r.barriers;
        j["frames"].push_back(std::move(f));
    }
    j["aggregates"] = nlohmann::ordered_json::array();
    for (const AggregateRow& a : report.aggregates) {
        nlohmann::ordered_json g;
        g["filter_mode"] = a.filter_mode;
        g["shrink_mode"] = a.shrink_mode;
        g["fps"] = round_ms(a.fps);
        g["mean_N_P"] = round_ms(a.mean_pairs);
        g["psnr_vs_ref"] = format_metric(a.psnr_vs_ref);
        g["ssim_vs_ref"] = format_metric(a.ssim_vs_ref);
        g["barriers"] = a.barriers;
        g["histogram"] = a.histogram.bins;
        j["aggregates"].push_back(std::move(g));
    }
    return j.dump(2) + "\n";
}

BenchReport run_bench(const LoDTree& tree, const std::vector<Camera>& frames,
                      const std::vector<BenchCombo>& combos,
                      const FilterConfig& filter_cfg) {
    if (combos.empty()) throw ValidationError("bench: empty combination list");
    if (frames.empty()) throw ValidationError("bench: no frames");

    BenchReport report;
    std::vector<Image> reference;
    reference.reserve(frames.size());

    for (std::size_t c = 0; c < combos.size(); ++c) {
        const BenchCombo& combo = combos[c];
        RenderOptions opts;
        opts.worker_count = filter_cfg.worker_count;
        opts.collect_kpc = true;
        opts.filter_mode = combo.filter;

        AggregateRow agg;
        agg.filter_mode = filter_mode_name(combo.filter);
        agg.shrink_mode = shrink_label(combo.shrink);
        double total_ms = 0.0, psnr_sum = 0.0, ssim_sum = 0.0;
        std::uint64_t pair_sum = 0;

        for (std::size_t f = 0; f < frames.size(); ++f) {
            RenderOutput out =
                render(tree, frames[f], filter_cfg, combo.shrink, opts);
            const Histogram h = redundancy_histogram(out.kpc);
            for (std::size_t b = 0; b < h.bins.size(); ++b)
                agg.histogram.bins[b] += h.bins[b];
            FrameRow row = make_frame_row(std::uint32_t(f), combo.filter,
                                          combo.shrink, out.stats, h.n_low());
            total_ms += row.t_total;
            pair_sum += row.n_pairs;
            agg.barriers = std::max(agg.barriers, row.barriers);
            report.frames.push_back(std::move(row));

            if (c == 0) {
                reference.push_back(std::move(out.image));
                psnr_sum = std::numeric_limits<double>::infinity();
                ssim_sum += 1.0;
            } else {
                psnr_sum += psnr(out.image, reference[f]);
                ssim_sum += ssim(out.image, reference[f]);
            }
        }
        // Floor at one timer tick so trivial scenes keep FPS finite.
        agg.fps = double(frames.size()) / (std::max(total_ms, 0.001) / 1000.0);
        agg.mean_pairs = double(pair_sum) / double(frames.size());
        agg.psnr_vs_ref = c == 0 ? psnr_sum
                                 : psnr_sum / double(frames.size());
        agg.ssim_vs_ref = ssim_sum / double(frames.size());
        report.aggregates.push_back(std::move(agg));
    }
    return report;
}

}  // namespace lodgs
