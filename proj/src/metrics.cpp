// SPDX-License-Identifier: Apache-2.0
#include "lodgs/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

namespace lodgs {

std::uint64_t Histogram::total() const {
    std::uint64_t t = 0;
    for (auto b : bins) t += b;
    return t;
}

std::vector<TileStats> tile_stats_from(const std::vector<TilePair>& sorted,
                                       const std::vector<double>& kpc) {
    if (sorted.size() != kpc.size())
        throw ValidationError("tile stats: pair/kpc length mismatch");
    std::vector<TileStats> tiles;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const std::uint32_t tile = sorted[i].tile;
        double sum = 0.0;
        std::uint32_t n = 0;
        for (; i < sorted.size() && sorted[i].tile == tile; ++i) {
            sum += kpc[i];
            ++n;
        }
        tiles.push_back({tile, n, sum / double(n)});
    }
    return tiles;
}

double view_gtc(const std::vector<TileStats>& tiles) {
    if (tiles.empty()) return std::numeric_limits<double>::quiet_NaN();
    double sum = 0.0;
    for (const TileStats& t : tiles) sum += t.gtc;
    return sum / double(tiles.size());
}

Histogram redundancy_histogram(const std::vector<double>& kpcs) {
    Histogram h;
    for (double k : kpcs) {
        std::size_t b = Histogram::kEdges.size();
        for (std::size_t e = 0; e < Histogram::kEdges.size(); ++e) {
            if (k < Histogram::kEdges[e]) {
                b = e;
                break;
            }
        }
        ++h.bins[b];
    }
    return h;
}

CalibrationReport make_report(const std::vector<double>& per_view,
                              double lambda_g, const Histogram& hist) {
    if (per_view.empty())
        throw ValidationError("calibration: no view produced any pairs");
    if (!(lambda_g > 0.0))
        throw ValidationError("calibration: lambda_g > 0 required");
    CalibrationReport r;
    r.per_view = per_view;
    double sum = 0.0;
    for (double v : per_view) sum += v;
    r.scene_mean = sum / double(per_view.size());
    if (!(r.scene_mean > 0.0))
        throw ValidationError("calibration: zero mean contribution");
    r.lambda_g = lambda_g;
    r.tau = lambda_g / r.scene_mean;
    r.n_views = std::uint32_t(per_view.size());
    r.histogram = hist;
    return r;
}

ViewInstrumentation instrumented_render(const LoDTree& tree, const Camera& cam,
                                        const FilterConfig& filter) {
    RenderOptions opts;
    opts.worker_count = filter.worker_count;
    opts.collect_kpc = true;
    ViewInstrumentation v;
    v.out = render(tree, cam, filter, ShrinkMode::three_sigma(), opts);
    v.contributions.reserve(v.out.pairs.size());
    for (std::size_t i = 0; i < v.out.pairs.size(); ++i)
        v.contributions.push_back({v.out.pairs[i], v.out.kpc[i]});
    v.tiles = tile_stats_from(v.out.pairs, v.out.kpc);
    v.view_gtc = view_gtc(v.tiles);
    return v;
}

CalibrationReport calibrate(const LoDTree& tree,
                            const std::vector<Camera>& views, double lambda_g,
                            const FilterConfig& filter) {
    if (views.empty()) throw ValidationError("calibration: no views");
    if (!(lambda_g > 0.0))
        throw ValidationError("calibration: lambda_g > 0 required");
    std::vector<double> per_view;
    std::vector<double> all_kpc;
    for (const Camera& cam : views) {
        ViewInstrumentation v = instrumented_render(tree, cam, filter);
        all_kpc.insert(all_kpc.end(), v.out.kpc.begin(), v.out.kpc.end());
        if (!std::isnan(v.view_gtc)) per_view.push_back(v.view_gtc);
    }
    return make_report(per_view, lambda_g, redundancy_histogram(all_kpc));
}

std::string report_to_json(const CalibrationReport& r) {
    nlohmann::ordered_json j;
    j["views"] = r.n_views;
    j["per_view_gtc"] = r.per_view;
    j["scene_gtc"] = r.scene_mean;
    j["lambda_g"] = r.lambda_g;
    j["tau"] = r.tau;
    j["histogram"] = r.histogram.bins;
    return j.dump(2) + "\n";
}

double psnr(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw ValidationError("psnr: image dimensions differ");
    double se = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        const double d = double(a.rgb[i]) - double(b.rgb[i]);
        se += d * d;
    }
    const double mse = se / double(a.rgb.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

namespace {

struct SsimWindow {
    static constexpr int kSize = 11;
    double w[kSize * kSize];

    SsimWindow() {
        const double sigma = 1.5;
        double sum = 0.0;
        for (int y = 0; y < kSize; ++y)
            for (int x = 0; x < kSize; ++x) {
                const double dx = x - kSize / 2, dy = y - kSize / 2;
                const double v = std::exp(-(dx * dx + dy * dy) /
                                          (2.0 * sigma * sigma));
                w[y * kSize + x] = v;
                sum += v;
            }
        for (double& v : w) v /= sum;
    }
};

}  // namespace

double ssim(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw ValidationError("ssim: image dimensions differ");
    constexpr int W = SsimWindow::kSize;
    if (a.width < W || a.height < W)
        throw ValidationError("ssim: images smaller than the 11x11 window");
    static const SsimWindow win;
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;  // k1,k2 at L = 1

    double total = 0.0;
    std::size_t n_win = 0;
    for (int c = 0; c < 3; ++c) {
        for (int y0 = 0; y0 + W <= a.height; ++y0) {
            for (int x0 = 0; x0 + W <= a.width; ++x0) {
                double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
                for (int dy = 0; dy < W; ++dy)
                    for (int dx = 0; dx < W; ++dx) {
                        const double wgt = win.w[dy * W + dx];
                        const std::size_t p =
                            (std::size_t(y0 + dy) * a.width + (x0 + dx)) * 3 + c;
                        const double pa = a.rgb[p], pb = b.rgb[p];
                        sx += wgt * pa;
                        sy += wgt * pb;
                        sxx += wgt * pa * pa;
                        syy += wgt * pb * pb;
                        // (pa*pb) first: keeps the sum, and so the whole
                        // metric, bit-symmetric in its arguments.
                        sxy += wgt * (pa * pb);
                    }
                const double vx = sxx - sx * sx, vy = syy - sy * sy;
                const double cov = sxy - sx * sy;
                total += ((2.0 * sx * sy + c1) * (2.0 * cov + c2)) /
                         ((sx * sx + sy * sy + c1) * (vx + vy + c2));
                ++n_win;
            }
        }
    }
    return total / double(n_win);
}

std::string format_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace lodgs
