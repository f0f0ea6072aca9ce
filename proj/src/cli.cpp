// SPDX-License-Identifier: Apache-2.0
#include "lodgs/cli.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "lodgs/bench.hpp"
#include "lodgs/camera_path.hpp"
#include "lodgs/cli.hpp"
#include "lodgs/kernels.hpp"
#include "lodgs/metrics.hpp"
#include "lodgs/scene_io.hpp"
#include "lodgs/tree_builder.hpp"

namespace lodgs {

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

template <typename T>
T spec_field(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("bad spec field: ") + key);
    }
}

SyntheticSceneSpec scene_spec_from_json(const json& j) {
    SyntheticSceneSpec s;
    s.nx = spec_field<std::uint32_t>(j, "nx", s.nx);
    s.ny = spec_field<std::uint32_t>(j, "ny", s.ny);
    s.spacing = spec_field<float>(j, "spacing", s.spacing);
    s.scale_min = spec_field<float>(j, "scale_min", s.scale_min);
    s.scale_max = spec_field<float>(j, "scale_max", s.scale_max);
    s.opacity_min = spec_field<float>(j, "opacity_min", s.opacity_min);
    s.opacity_max = spec_field<float>(j, "opacity_max", s.opacity_max);
    s.seed = spec_field<std::uint64_t>(j, "seed", s.seed);
    s.congestion = spec_field<std::uint32_t>(j, "congestion", s.congestion);
    if (j.contains("palette")) {
        s.palette.clear();
        try {
            for (const json& c : j.at("palette")) {
                if (!c.is_array() || c.size() != 3)
                    throw FormatError("bad spec field: palette");
                s.palette.push_back({c[0].get<float>(), c[1].get<float>(),
                                     c[2].get<float>()});
            }
        } catch (const json::exception&) {
            throw FormatError("bad spec field: palette");
        }
    }
    return s;
}

TreeBuildConfig tree_config_from_json(const json& j) {
    TreeBuildConfig c;
    c.depth = spec_field<std::uint32_t>(j, "depth", c.depth);
    c.shrink_factor = spec_field<float>(j, "shrink_factor", c.shrink_factor);
    c.children_per_node =
        spec_field<std::uint32_t>(j, "children", c.children_per_node);
    c.seed = spec_field<std::uint64_t>(j, "seed", c.seed);
    return c;
}

LoDTree flat_tree(std::vector<GaussianNode> nodes) {
    LoDTree t;
    for (GaussianNode& n : nodes) {
        n.level = 0;
        n.parent = kRootParent;
        n.leaf = true;
        t.push_node(n);
    }
    t.rebuild_derived();
    return t;
}

std::vector<GaussianNode> roots_of(const LoDTree& tree) {
    std::vector<GaussianNode> roots;
    for (NodeIndex i = tree.level_begin(0); i < tree.level_end(0); ++i)
        roots.push_back(tree.node(i));
    return roots;
}

int cmd_gen(const std::string& spec_file, const std::string& out) {
    const json j = read_json_file(spec_file);
    const SyntheticSceneSpec spec =
        scene_spec_from_json(j.contains("scene") ? j.at("scene") : json::object());
    std::vector<GaussianNode> nodes = generate_synthetic_scene(spec);
    LoDTree tree = j.contains("tree")
                       ? build_tree(nodes, tree_config_from_json(j.at("tree")))
                       : flat_tree(std::move(nodes));
    save_scene(tree, out);
    std::printf("wrote %s: %zu nodes, %u levels\n", out.c_str(),
                tree.node_count(), unsigned(tree.level_count()));
    return 0;
}

int cmd_build_tree(const std::string& scene_file, const TreeBuildConfig& cfg,
                   const std::string& out) {
    const LoDTree base = load_scene(scene_file);
    LoDTree tree = build_tree(roots_of(base), cfg);
    save_scene(tree, out);
    std::printf("wrote %s: %zu nodes, %u levels\n", out.c_str(),
                tree.node_count(), unsigned(tree.level_count()));
    return 0;
}

int cmd_calibrate(const std::string& scene_file, const std::string& views_file,
                  double lambda_g, const FilterConfig& fc,
                  const std::string& out) {
    const LoDTree tree = load_scene(scene_file);
    const std::vector<Camera> views = load_views(views_file);
    const CalibrationReport report = calibrate(tree, views, lambda_g, fc);
    write_text_file(out, report_to_json(report));
    std::printf("views %u  scene_gtc %.6f  tau %.6f\n", report.n_views,
                report.scene_mean, report.tau);
    return 0;
}

double tau_from_calibration(const std::string& file) {
    const json j = read_json_file(file);
    if (!j.contains("tau"))
        throw FormatError("calibration file: missing tau");
    const double tau = j.at("tau").get<double>();
    if (!(tau > 0.0 && tau < 1.0))
        throw ValidationError("calibration file: tau outside (0,1)");
    return tau;
}

ShrinkMode resolve_shrink(const std::string& name, std::optional<double> tau,
                          const std::string& calibration_file) {
    if (name == "3sigma") return ShrinkMode::three_sigma();
    if (name == "fixed") return ShrinkMode::fixed();
    if (name != "adaptive")
        throw ValidationError("unknown shrink mode: " + name);
    if (tau) return ShrinkMode::adaptive(*tau);
    if (!calibration_file.empty())
        return ShrinkMode::adaptive(tau_from_calibration(calibration_file));
    throw ValidationError("--shrink adaptive needs --tau or --calibration");
}

FilterMode resolve_filter(const std::string& name) {
    if (name == "serial") return FilterMode::serial;
    if (name == "parallel") return FilterMode::parallel;
    throw ValidationError("unknown filter mode: " + name);
}

int cmd_render(const std::string& scene_file, const std::string& path_file,
               FilterMode filter, const ShrinkMode& shrink,
               const FilterConfig& fc, const std::string& out_dir) {
    const LoDTree tree = load_scene(scene_file);
    const std::vector<Camera> frames = load_camera_path(path_file).sample();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    RenderOptions opts;
    opts.worker_count = fc.worker_count;
    opts.collect_kpc = true;  // rows need N_low
    opts.filter_mode = filter;

    BenchReport report;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        RenderOutput out = render(tree, frames[f], fc, shrink, opts);
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05zu.ppm", f);
        save_ppm(out.image, out_dir + "/" + name);
        report.frames.push_back(
            make_frame_row(std::uint32_t(f), filter, shrink, out.stats,
                           redundancy_histogram(out.kpc).n_low()));
    }
    write_text_file(out_dir + "/report.csv", bench_csv(report));
    write_text_file(out_dir + "/report.json", bench_json(report));
    std::printf("wrote %zu frames to %s\n", frames.size(), out_dir.c_str());
    return 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t p = s.find(sep, start);
        parts.push_back(s.substr(start, p - start));
        if (p == std::string::npos) break;
        start = p + 1;
    }
    return parts;
}

// Matrix syntax: "<filters>:<shrinks>", comma lists, e.g.
// "serial,parallel:3sigma,adaptive".
std::vector<BenchCombo> parse_matrix(const std::string& spec,
                                     std::optional<double> adaptive_tau) {
    const auto halves = split(spec, ':');
    if (halves.size() != 2 || halves[0].empty() || halves[1].empty())
        throw ValidationError("matrix: expected filters:shrinks, e.g. "
                              "serial,parallel:3sigma,adaptive");
    std::vector<BenchCombo> combos;
    for (const std::string& f : split(halves[0], ','))
        for (const std::string& s : split(halves[1], ',')) {
            BenchCombo c;
            c.filter = resolve_filter(f);
            if (s == "adaptive") {
                if (!adaptive_tau)
                    throw ValidationError("matrix: adaptive needs calibration");
                c.shrink = ShrinkMode::adaptive(*adaptive_tau);
            } else {
                c.shrink = resolve_shrink(s, std::nullopt, "");
            }
            combos.push_back(c);
        }
    return combos;
}

std::string report_base(std::string out) {
    for (const char* suffix : {".csv", ".json"})
        if (out.size() > std::strlen(suffix) &&
            out.ends_with(suffix))
            return out.substr(0, out.size() - std::strlen(suffix));
    return out;
}

int cmd_bench(const std::string& scene_file, const std::string& path_file,
              const std::string& matrix, double lambda_g,
              const FilterConfig& fc, const std::string& out) {
    const LoDTree tree = load_scene(scene_file);
    const std::vector<Camera> frames = load_camera_path(path_file).sample();

    std::optional<double> adaptive_tau;
    if (matrix.find("adaptive") != std::string::npos)
        adaptive_tau = calibrate(tree, frames, lambda_g, fc).tau;

    const std::vector<BenchCombo> combos = parse_matrix(matrix, adaptive_tau);
    const BenchReport report = run_bench(tree, frames, combos, fc);

    const std::string base = report_base(out);
    write_text_file(base + ".csv", bench_csv(report));
    write_text_file(base + ".json", bench_json(report));
    for (const AggregateRow& a : report.aggregates)
        std::printf("%s/%s: fps %.3f  mean_N_P %.1f  psnr %s  ssim %s\n",
                    a.filter_mode.c_str(), a.shrink_mode.c_str(), a.fps,
                    a.mean_pairs, format_metric(a.psnr_vs_ref).c_str(),
                    format_metric(a.ssim_vs_ref).c_str());
    return 0;
}

int cmd_compare(const std::string& a_file, const std::string& b_file) {
    const Image a = load_ppm(a_file);
    const Image b = load_ppm(b_file);
    std::printf("PSNR %s\n", format_metric(psnr(a, b)).c_str());
    std::printf("SSIM %s\n", format_metric(ssim(a, b)).c_str());
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"LoD gaussian splat renderer"};
    app.require_subcommand(1);

    std::string kernels_flag = "auto";
    app.add_option("--kernels", kernels_flag, "kernel variant")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    std::function<int()> action;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic scene");
    struct {
        std::string spec, out;
    } g;
    gen->add_option("--spec", g.spec, "scene spec JSON")->required();
    gen->add_option("--out", g.out, "output scene file")->required();
    gen->callback([&] { action = [&] { return cmd_gen(g.spec, g.out); }; });

    // build-tree
    auto* bt = app.add_subcommand("build-tree", "build an LoD tree from a "
                                                "scene's level-0 nodes");
    struct {
        std::string scene, out;
        TreeBuildConfig cfg;
    } b;
    bt->add_option("--scene", b.scene)->required();
    bt->add_option("--depth", b.cfg.depth, "leaf level L");
    bt->add_option("--gamma", b.cfg.shrink_factor, "per-level scale factor");
    bt->add_option("--children", b.cfg.children_per_node, "children per node");
    bt->add_option("--seed", b.cfg.seed);
    bt->add_option("--out", b.out)->required();
    bt->callback(
        [&] { action = [&] { return cmd_build_tree(b.scene, b.cfg, b.out); }; });

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "derive the shrink threshold");
    struct {
        std::string scene, views, out;
        double lambda_g = 0.2;
        FilterConfig fc;
    } c;
    cal->add_option("--scene", c.scene)->required();
    cal->add_option("--views", c.views)->required();
    cal->add_option("--lambda-g", c.lambda_g);
    cal->add_option("--tau-r", c.fc.tau_r);
    cal->add_option("--threads", c.fc.worker_count);
    cal->add_option("--out", c.out)->required();
    cal->callback([&] {
        action = [&] { return cmd_calibrate(c.scene, c.views, c.lambda_g, c.fc,
                                            c.out); };
    });

    // render
    auto* ren = app.add_subcommand("render", "render a camera path");
    struct {
        std::string scene, path, filter = "parallel", shrink = "3sigma";
        std::string calibration, out;
        std::optional<double> tau;
        FilterConfig fc;
    } r;
    ren->add_option("--scene", r.scene)->required();
    ren->add_option("--path", r.path)->required();
    ren->add_option("--filter", r.filter)
        ->check(CLI::IsMember({"serial", "parallel"}));
    ren->add_option("--shrink", r.shrink)
        ->check(CLI::IsMember({"3sigma", "fixed", "adaptive"}));
    ren->add_option("--tau", r.tau, "adaptive shrink threshold");
    ren->add_option("--calibration", r.calibration, "calibration report JSON");
    ren->add_option("--tau-r", r.fc.tau_r, "LoD radius threshold, pixels");
    ren->add_option("--threads", r.fc.worker_count);
    ren->add_option("--out", r.out, "output directory")->required();
    ren->callback([&] {
        action = [&] {
            return cmd_render(r.scene, r.path, resolve_filter(r.filter),
                              resolve_shrink(r.shrink, r.tau, r.calibration),
                              r.fc, r.out);
        };
    });

    // bench
    auto* ben = app.add_subcommand("bench", "A/B the filter x shrink matrix");
    struct {
        std::string scene, path, matrix, out;
        double lambda_g = 0.2;
        FilterConfig fc;
    } m;
    ben->add_option("--scene", m.scene)->required();
    ben->add_option("--path", m.path)->required();
    ben->add_option("--matrix", m.matrix, "filters:shrinks")->required();
    ben->add_option("--lambda-g", m.lambda_g);
    ben->add_option("--tau-r", m.fc.tau_r);
    ben->add_option("--threads", m.fc.worker_count);
    ben->add_option("--out", m.out, "report base path")->required();
    ben->callback([&] {
        action = [&] { return cmd_bench(m.scene, m.path, m.matrix, m.lambda_g,
                                        m.fc, m.out); };
    });

    // compare
    auto* cmp = app.add_subcommand("compare", "PSNR/SSIM of two PPM images");
    struct {
        std::string a, b;
    } p;
    cmp->add_option("--a", p.a)->required();
    cmp->add_option("--b", p.b)->required();
    cmp->callback([&] { action = [&] { return cmd_compare(p.a, p.b); }; });

    std::vector<const char*> argv;
    argv.push_back("lodgs");
    for (const std::string& s : args) argv.push_back(s.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (kernels_flag == "auto")
            reset_kernel_backend();
        else
            force_kernel_backend(kernels_flag == "scalar" ? Backend::scalar
                                                          : Backend::avx2);
        return action();
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}

}  // namespace lodgs
