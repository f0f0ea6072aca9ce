// SPDX-License-Identifier: Apache-2.0
//
// Release gate. Each check prints exactly one PASS/FAIL line; the binary
// exits nonzero if any check fails. Run through ctest or directly.
#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lodgs/camera_path.hpp"
#include "lodgs/cli.hpp"
#include "lodgs/filter.hpp"
#include "lodgs/metrics.hpp"
#include "lodgs/rasterizer.hpp"
#include "lodgs/scene_io.hpp"
#include "lodgs/tree_builder.hpp"
#include "../unit/test_util.hpp"

using namespace lodgs;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome ok(std::string detail = "") { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lodgs_acc_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Diverts the CLI's progress chatter away from the gate's PASS/FAIL stream.
struct QuietStdout {
    int saved;
    QuietStdout() {
        std::fflush(stdout);
        saved = ::dup(1);
        const int devnull = ::open("/dev/null", O_WRONLY);
        ::dup2(devnull, 1);
        ::close(devnull);
    }
    ~QuietStdout() {
        std::fflush(stdout);
        ::dup2(saved, 1);
        ::close(saved);
    }
};

// ---- 1: the three filters agree on randomized configurations -------------

Outcome check_filter_equivalence() {
    Rng rng(20240801);
    int configs = 0;
    std::size_t biggest = 0;
    // (depth, children, nx, ny, congestion) keeping node counts under 1e5.
    const struct {
        std::uint32_t depth, k, nx, ny, cong;
    } shapes[] = {
        {2, 8, 3, 3, 1}, {3, 8, 2, 2, 1}, {4, 5, 2, 2, 1}, {5, 3, 3, 2, 1},
        {6, 2, 3, 3, 2}, {6, 4, 3, 3, 2}, {2, 6, 4, 4, 2}, {3, 4, 3, 3, 1},
        {4, 3, 2, 3, 2}, {5, 4, 2, 2, 1}, {6, 3, 2, 2, 1}, {2, 1, 5, 5, 1},
        {3, 7, 2, 2, 1},
    };
    for (std::size_t s = 0; s < std::size(shapes); ++s) {
        for (int rep = 0; rep < 2; ++rep) {
            const auto& sh = shapes[s];
            const float gamma = float(rng.uniform(0.3, 0.7));
            const LoDTree t = test::make_tree(900 + s * 10 + rep, sh.depth,
                                              sh.k, gamma, sh.nx, sh.ny,
                                              sh.cong);
            biggest = std::max(biggest, t.node_count());
            if (t.node_count() > 100000)
                return fail("fixture exceeded 1e5 nodes");
            for (int c = 0; c < 8; ++c) {
                const Camera cam = test::orbit_camera(
                    rng, 160, 120, rng.uniform(2.0, 90.0));
                const FilterConfig fc{rng.uniform(0.5, 50.0),
                                      1 + unsigned(rng.next_below(8))};
                const FilterResult ro = filter_oracle(t, cam, fc);
                const FilterResult rs = filter_serial(t, cam, fc);
                const FilterResult rp = filter_parallel(t, cam, fc);
                if (ro.selected != rs.selected || ro.selected != rp.selected)
                    return fail("selection mismatch at config " +
                                std::to_string(configs));
                ++configs;
            }
        }
    }
    if (configs < 200)
        return fail("only " + std::to_string(configs) + " configurations");
    return ok(std::to_string(configs) + " configs, largest tree " +
              std::to_string(biggest) + " nodes");
}

// ---- 2: barrier counts ----------------------------------------------------

Outcome check_depth_decoupling() {
    for (std::uint32_t L = 2; L <= 8; ++L) {
        const LoDTree t = test::make_tree(70 + L, L, 2, 0.5f, 2, 2);
        Camera cam = test::front_camera(200, 200);
        cam.world_to_cam_translation = {0, 0, 30};
        // Screen radii never drop under the dilation floor (~1.6 px), so a
        // tiny threshold forces the serial descent all the way down.
        const FilterConfig fc{1e-3, 2};
        const FilterResult rp = filter_parallel(t, cam, fc);
        if (rp.barriers != 2)
            return fail("parallel barriers " + std::to_string(rp.barriers) +
                        " at L=" + std::to_string(L));
        if (rp.passes != 2)
            return fail("parallel passes " + std::to_string(rp.passes));
        const FilterResult rs = filter_serial(t, cam, fc);
        const std::size_t leaf_begin = t.level_begin(L);
        const bool reached_leaves =
            !rs.selected.empty() && rs.selected.back() >= leaf_begin;
        if (!reached_leaves)
            return fail("serial never reached leaves at L=" +
                        std::to_string(L));
        if (rs.barriers < int(L) + 1)
            return fail("serial barriers " + std::to_string(rs.barriers) +
                        " < L+1 at L=" + std::to_string(L));
    }
    return ok("parallel 2 barriers for L in {2..8}, serial >= L+1");
}

// ---- 3: parallel filtering is at least twice as fast ----------------------

Outcome check_filter_speedup() {
    // 14 roots x 37449 nodes/root = 524286 nodes at L = 5.
    const LoDTree t = test::make_tree(3003, 5, 8, 0.5f, 7, 2);
    if (t.node_count() < 500000)
        return fail("fixture too small: " + std::to_string(t.node_count()));
    Camera cam = test::front_camera(200, 200);
    cam.world_to_cam_translation = {0, 0, 30};
    const FilterConfig fc{1e-3, 8};  // full descent, 8 workers

    auto median_ms = [&](auto&& f) {
        f();  // warm the pool and the caches
        std::vector<double> runs;
        for (int i = 0; i < 9; ++i) {
            const auto t0 = Clock::now();
            f();
            runs.push_back(ms_between(t0, Clock::now()));
        }
        std::sort(runs.begin(), runs.end());
        return runs[4];
    };

    const double serial_ms = median_ms([&] { filter_serial(t, cam, fc); });
    const double parallel_ms = median_ms([&] { filter_parallel(t, cam, fc); });
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "serial %.2f ms, parallel %.2f ms, ratio %.2f",
                  serial_ms, parallel_ms, parallel_ms / serial_ms);
    if (!(parallel_ms <= 0.5 * serial_ms)) return fail(buf);
    return ok(buf);
}

// ---- 4: shrink radius inverts the opacity profile -------------------------

Outcome check_shrink_radius() {
    Rng rng(44);
    for (int i = 0; i < 1000; ++i) {
        const double tau = rng.uniform(0.01, 0.9);
        // Ratios below e^4.5 keep the radius off the 3 sigma clamp.
        const double ratio_cap = std::min(std::exp(4.5) - 0.1, 1.0 / tau);
        const double a0 = tau * rng.uniform(1.001, ratio_cap);
        const double sigma = rng.uniform(0.3, 8.0);
        Projected2D p;
        p.sigma_max = sigma;
        p.radius = 3.0 * sigma;
        const double r =
            effective_radius(p, float(a0), ShrinkMode::adaptive(tau));
        if (!(r > 0.0)) return fail("zero radius with a0 > tau");
        const double at_edge =
            double(float(a0)) * std::exp(-r * r / (2.0 * sigma * sigma));
        if (std::abs(at_edge - tau) > 1e-6)
            return fail("edge opacity off by " +
                        std::to_string(std::abs(at_edge - tau)));
    }
    for (int i = 0; i < 100; ++i) {
        const double tau = rng.uniform(0.05, 0.9);
        // Margin keeps float(a0) below tau after rounding.
        const double a0 = tau * rng.uniform(0.1, 0.999);
        Projected2D p;
        p.sigma_max = rng.uniform(0.3, 8.0);
        p.radius = 3.0 * p.sigma_max;
        if (effective_radius(p, float(a0), ShrinkMode::adaptive(tau)) != 0.0)
            return fail("a0 <= tau did not cull");
    }
    return ok("1000 inversions within 1e-6, 100 culls exact");
}

// ---- 5: blending ----------------------------------------------------------

Outcome check_blending() {
    // Hand case: 0.5 over 0.5 composites to exactly (0.5, 0.25, 0).
    {
        const TileGrid grid = TileGrid::make(16, 16);
        BlendList list;
        test::push_flat(list, 8, 8, 0.0, 0.5, {1, 0, 0}, 20.0, 1.f, 0);
        test::push_flat(list, 8, 8, 0.0, 0.5, {0, 1, 0}, 20.0, 2.f, 1);
        auto pairs = bin_to_tiles(list, grid, 16, 16);
        sort_pairs(pairs);
        const Image img = alpha_blend(pairs, list, grid, 16, 16, 1);
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) {
                const float* px = img.pixel(x, y);
                if (px[0] != 0.5f || px[1] != 0.25f || px[2] != 0.0f)
                    return fail("hand case pixel not exact");
            }
    }
    // 50 random micro-scenes against the per-pixel reference.
    Rng rng(55);
    for (int rep = 0; rep < 50; ++rep) {
        const int w = 17 + int(rng.next_below(60));
        const int h = 16 + int(rng.next_below(50));
        const TileGrid grid = TileGrid::make(w, h);
        BlendList list;
        const std::size_t n = 1 + rng.next_below(30);
        for (std::size_t i = 0; i < n; ++i) {
            const double ca = std::exp(rng.uniform(-4.0, 0.0));
            const double cc = std::exp(rng.uniform(-4.0, 0.0));
            const double rho = rng.uniform(-0.8, 0.8);
            list.mean_x.push_back(rng.uniform(-5.0, w + 5.0));
            list.mean_y.push_back(rng.uniform(-5.0, h + 5.0));
            list.conic_a.push_back(ca);
            list.conic_b.push_back(rho * std::sqrt(ca * cc));
            list.conic_c.push_back(cc);
            list.opacity.push_back(rng.uniform(0.002, 0.99));
            list.col_r.push_back(rng.uniform(0.0, 1.0));
            list.col_g.push_back(rng.uniform(0.0, 1.0));
            list.col_b.push_back(rng.uniform(0.0, 1.0));
            list.radius.push_back(rng.uniform(1.0, 25.0));
            list.depth.push_back(float(rng.uniform(0.1, 50.0)));
            list.node.push_back(NodeIndex(i));
        }
        auto pairs = bin_to_tiles(list, grid, w, h);
        sort_pairs(pairs);
        const Image img = alpha_blend(pairs, list, grid, w, h, 1);
        const Image ref = test::reference_blend(pairs, list, grid, w, h);
        const double d = test::max_abs_diff(img, ref);
        if (d > 1e-6)
            return fail("micro-scene " + std::to_string(rep) + " off by " +
                        std::to_string(d));
    }
    return ok("hand case exact, 50 micro-scenes within 1e-6");
}

// ---- 6: kpc instrumentation against brute force ---------------------------

Outcome check_kpc_oracle() {
    Rng rng(66);
    for (int rep = 0; rep < 3; ++rep) {
        // 200 root gaussians via the congestion overlay.
        SyntheticSceneSpec spec;
        spec.nx = 5;
        spec.ny = 5;
        spec.congestion = 8;
        spec.seed = 660 + rep;
        LoDTree t;
        for (GaussianNode n : generate_synthetic_scene(spec)) {
            n.level = 0;
            n.parent = kRootParent;
            n.leaf = true;
            t.push_node(n);
        }
        t.rebuild_derived();
        if (t.node_count() != 200) return fail("fixture is not 200 gaussians");

        const Camera cam = test::orbit_camera(rng, 160, 120, 12.0);
        const ViewInstrumentation v =
            instrumented_render(t, cam, FilterConfig{3.0, 2});
        if (v.out.pairs.size() < 50) return fail("too few pairs to check");
        const TileGrid grid = TileGrid::make(int(cam.width), int(cam.height));
        std::vector<double> ref;
        test::reference_blend(v.out.pairs, v.out.gaussians, grid,
                              int(cam.width), int(cam.height), &ref);
        for (std::size_t i = 0; i < ref.size(); ++i)
            if (std::abs(v.contributions[i].kpc - ref[i]) > 1e-5)
                return fail("kpc off by " +
                            std::to_string(
                                std::abs(v.contributions[i].kpc - ref[i])));

        double tile_sum = 0.0;
        std::uint32_t tile = v.out.pairs[0].tile;
        for (std::size_t i = 0; i < v.out.pairs.size(); ++i) {
            if (v.out.pairs[i].tile != tile) {
                tile = v.out.pairs[i].tile;
                tile_sum = 0.0;
            }
            tile_sum += v.out.kpc[i];
            if (tile_sum > 256.0 + 1e-9)
                return fail("tile energy exceeded 256");
        }
    }
    return ok("3 scenes x 200 gaussians, kpc within 1e-5, tile energy bounded");
}

// ---- 7: calibration arithmetic -------------------------------------------

Outcome check_calibration_arithmetic() {
    const std::vector<TilePair> sorted{{0, 1.f, 0}, {0, 2.f, 1}};
    const std::vector<double> kpc{10.0, 2.0};
    const auto tiles = tile_stats_from(sorted, kpc);
    if (tiles.size() != 1 || tiles[0].gtc != 6.0)
        return fail("tile mean is not exactly 6");
    const double gv = view_gtc(tiles);
    if (gv != 6.0) return fail("view mean is not exactly 6");
    for (double lambda : {0.1, 0.2, 0.5}) {
        const CalibrationReport r = make_report({gv}, lambda, {});
        if (r.tau != lambda / 6.0)
            return fail("tau is not exactly lambda/6 at lambda=" +
                        std::to_string(lambda));
    }
    return ok("Gv == 6 exact; tau == lambda/6 exact for 0.1, 0.2, 0.5");
}

// ---- 8 and 9 share the congested fixture ----------------------------------

struct ShrinkStudy {
    std::uint64_t pairs_3sigma = 0, pairs_fixed = 0, pairs_adaptive = 0;
    std::uint64_t low_3sigma = 0, low_adaptive = 0;  // kpc < 0.05
    double min_psnr = std::numeric_limits<double>::infinity();
    double tau = 0.0;
    double seconds = 0.0;
};

std::uint64_t count_low(const std::vector<double>& kpc) {
    const Histogram h = redundancy_histogram(kpc);
    return h.bins[0] + h.bins[1];  // [0, 0.05)
}

ShrinkStudy run_shrink_study() {
    const auto t0 = Clock::now();
    const LoDTree tree = test::make_tree(8008, 2, 8, 0.5f, 4, 4, 4);
    Rng rng(88);
    std::vector<Camera> views;
    for (int i = 0; i < 5; ++i)
        views.push_back(test::orbit_camera(rng, 160, 120, 12.0));

    // tau_r picks the level whose footprints are large enough that the
    // calibrated threshold lands in the gentle-shrink regime.
    const FilterConfig fc{16.0, 2};
    ShrinkStudy s;
    s.tau = calibrate(tree, views, 0.2, fc).tau;

    RenderOptions opts;
    opts.worker_count = 2;
    opts.collect_kpc = true;
    for (const Camera& cam : views) {
        RenderOutput r3 = render(tree, cam, fc, ShrinkMode::three_sigma(), opts);
        RenderOutput rf = render(tree, cam, fc, ShrinkMode::fixed(), opts);
        RenderOutput ra =
            render(tree, cam, fc, ShrinkMode::adaptive(s.tau), opts);
        s.pairs_3sigma += r3.stats.n_pairs;
        s.pairs_fixed += rf.stats.n_pairs;
        s.pairs_adaptive += ra.stats.n_pairs;
        s.low_3sigma += count_low(r3.kpc);
        s.low_adaptive += count_low(ra.kpc);
        s.min_psnr = std::min(s.min_psnr, psnr(ra.image, r3.image));
    }
    s.seconds = ms_between(t0, Clock::now()) / 1000.0;
    return s;
}

Outcome check_shrink_direction(const ShrinkStudy& s) {
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "N_P 3sigma %llu, fixed %llu, adaptive %llu, "
                  "worst psnr %.1f dB, tau %.4f",
                  (unsigned long long)s.pairs_3sigma,
                  (unsigned long long)s.pairs_fixed,
                  (unsigned long long)s.pairs_adaptive, s.min_psnr, s.tau);
    if (!(s.pairs_adaptive <= 0.8 * double(s.pairs_3sigma))) return fail(buf);
    if (!(s.pairs_fixed >= s.pairs_adaptive)) return fail(buf);
    if (!(s.min_psnr >= 30.0)) return fail(buf);
    return ok(buf);
}

Outcome check_redundancy_reduction(const ShrinkStudy& s) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "low-kpc pairs %llu -> %llu (ratio %.3f)",
                  (unsigned long long)s.low_3sigma,
                  (unsigned long long)s.low_adaptive,
                  s.low_3sigma ? double(s.low_adaptive) / double(s.low_3sigma)
                               : 0.0);
    if (s.low_3sigma == 0) return fail("fixture produced no low-kpc pairs");
    if (!(double(s.low_adaptive) <= 0.7 * double(s.low_3sigma)))
        return fail(buf);
    return ok(buf);
}

// ---- 10: thread-count determinism through the CLI -------------------------

Outcome check_determinism() {
    TempDir dir;
    const std::string spec = dir.file("spec.json");
    {
        std::ofstream f(spec);
        f << "{\"scene\": {\"nx\": 3, \"ny\": 3, \"seed\": 10, "
             "\"congestion\": 2}, \"tree\": {\"depth\": 2}}";
    }
    const std::string scene = dir.file("scene.lodgs");
    QuietStdout quiet;
    if (run_cli({"gen", "--spec", spec, "--out", scene}) != 0)
        return fail("gen failed");

    Camera a = test::front_camera(128, 96);
    a.world_to_cam_translation = {0, 0, 12};
    Camera b = a;
    b.world_to_cam_translation = {1, 0.5, 9};
    CameraPath path;
    path.keyframes = {a, b};
    path.samples = {9};  // ten frames
    const std::string path_file = dir.file("path.json");
    save_camera_path(path, path_file);

    const std::string out1 = dir.file("t1");
    const std::string out8 = dir.file("t8");
    if (run_cli({"render", "--scene", scene, "--path", path_file, "--threads",
                 "1", "--out", out1}) != 0)
        return fail("render --threads 1 failed");
    if (run_cli({"render", "--scene", scene, "--path", path_file, "--threads",
                 "8", "--out", out8}) != 0)
        return fail("render --threads 8 failed");

    for (int f = 0; f < 10; ++f) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05d.ppm", f);
        const std::string p1 = out1 + "/" + name;
        const std::string p8 = out8 + "/" + name;
        if (slurp(p1).empty() || slurp(p1) != slurp(p8))
            return fail(std::string("frame differs: ") + name);
    }
    const auto j1 = nlohmann::json::parse(slurp(out1 + "/report.json"));
    const auto j8 = nlohmann::json::parse(slurp(out8 + "/report.json"));
    for (int f = 0; f < 10; ++f)
        if (j1["frames"][f]["N_P"] != j8["frames"][f]["N_P"])
            return fail("N_P differs at frame " + std::to_string(f));
    return ok("10 frames byte-identical, N_P identical");
}

// ---- 11: persistence round trip and validation ----------------------------

Outcome check_roundtrip_validation() {
    TempDir dir;
    Rng rng(1111);
    for (int i = 0; i < 100; ++i) {
        const std::uint32_t depth = 1 + std::uint32_t(rng.next_below(4));
        const std::uint32_t k = 1 + std::uint32_t(rng.next_below(8));
        const float gamma = float(rng.uniform(0.3, 0.8));
        const LoDTree t = test::make_tree(5000 + i, depth, k, gamma, 2, 2);
        const std::string f = dir.file("rt.lodgs");
        save_scene(t, f);
        const LoDTree u = load_scene(f);

        auto same_f32 = [](const std::vector<float>& a,
                           const std::vector<float>& b) {
            return a.size() == b.size() &&
                   std::memcmp(a.data(), b.data(), a.size() * 4) == 0;
        };
        if (!same_f32(t.mean_x, u.mean_x) || !same_f32(t.mean_y, u.mean_y) ||
            !same_f32(t.mean_z, u.mean_z) || !same_f32(t.scale_x, u.scale_x) ||
            !same_f32(t.scale_y, u.scale_y) ||
            !same_f32(t.scale_z, u.scale_z) || !same_f32(t.quat_w, u.quat_w) ||
            !same_f32(t.quat_x, u.quat_x) || !same_f32(t.quat_y, u.quat_y) ||
            !same_f32(t.quat_z, u.quat_z) || !same_f32(t.opacity, u.opacity) ||
            !same_f32(t.color_r, u.color_r) ||
            !same_f32(t.color_g, u.color_g) ||
            !same_f32(t.color_b, u.color_b) || t.parent != u.parent ||
            t.leaf != u.leaf || t.level_offsets != u.level_offsets ||
            t.shrink_factor != u.shrink_factor)
            return fail("round trip not bit-exact at tree " +
                        std::to_string(i));
    }

    // Seeded single-field corruptions must each be caught.
    for (int i = 0; i < 60; ++i) {
        LoDTree t = test::make_tree(7000 + i, 2, 4, 0.5f, 2, 2);
        Rng corrupt(mix_seed(42, std::uint64_t(i)));
        const NodeIndex n =
            NodeIndex(corrupt.next_below(t.node_count()));
        switch (i % 8) {
            case 0: t.scale_x[n] = -1.0f; break;
            case 1: t.opacity[n] = 0.0f; break;
            case 2: t.opacity[n] = 1.5f; break;
            case 3: t.quat_w[n] = 3.0f; break;  // far off unit norm
            case 4: t.color_r[n] = 2.0f; break;
            case 5: t.mean_y[n] = std::numeric_limits<float>::quiet_NaN(); break;
            case 6: t.leaf[n] = !t.leaf[n]; break;
            case 7:
                if (t.parent[n] == kRootParent)
                    t.parent[n] = 1;  // a root gaining a parent
                else
                    t.parent[n] = kRootParent;  // a child losing its parent
                break;
        }
        if (validate_tree(t).empty())
            return fail("corruption " + std::to_string(i) + " went unnoticed");
    }
    return ok("100 round trips bit-exact, 60 corruptions caught");
}

}  // namespace

int main() {
    struct Check {
        const char* name;
        std::function<Outcome()> run;
    };

    ShrinkStudy study;
    bool study_ready = false;
    auto ensure_study = [&]() -> ShrinkStudy& {
        if (!study_ready) {
            study = run_shrink_study();
            study_ready = true;
        }
        return study;
    };

    const Check checks[] = {
        {"filter-equivalence", check_filter_equivalence},
        {"depth-decoupling", check_depth_decoupling},
        {"filter-speedup", check_filter_speedup},
        {"shrink-radius", check_shrink_radius},
        {"blending", check_blending},
        {"kpc-oracle", check_kpc_oracle},
        {"calibration-arithmetic", check_calibration_arithmetic},
        {"shrink-direction", [&] { return check_shrink_direction(ensure_study()); }},
        {"redundancy-reduction",
         [&] { return check_redundancy_reduction(ensure_study()); }},
        {"determinism", check_determinism},
        {"roundtrip-validation", check_roundtrip_validation},
    };

    int failures = 0;
    int idx = 0;
    for (const Check& c : checks) {
        ++idx;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failures;
        std::printf("%s %2d %s%s%s\n", o.pass ? "PASS" : "FAIL", idx, c.name,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        std::fflush(stdout);
    }
    if (failures)
        std::printf("%d of %zu checks failed\n", failures, std::size(checks));
    else
        std::printf("all %zu checks passed\n", std::size(checks));
    return failures ? 1 : 0;
}
