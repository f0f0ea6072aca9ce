// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "lodgs/scene.hpp"
#include "lodgs/scene_io.hpp"
#include "test_util.hpp"

using namespace lodgs;

namespace {

GaussianNode simple_node(std::uint32_t level, NodeIndex parent, bool leaf) {
    GaussianNode n;
    n.mean = {0.f, 0.f, 0.f};
    n.scale = {1.f, 1.f, 1.f};
    n.rotation = {1.f, 0.f, 0.f, 0.f};
    n.opacity = 0.5f;
    n.color = {0.2f, 0.4f, 0.6f};
    n.level = level;
    n.parent = parent;
    n.leaf = leaf;
    return n;
}

LoDTree two_level_tree() {
    LoDTree t;
    t.push_node(simple_node(0, kRootParent, false));
    auto child = simple_node(1, 0, true);
    child.mean = {1.f, 0.f, 0.f};
    t.push_node(child);
    child.mean = {-1.f, 0.f, 0.f};
    t.push_node(child);
    t.rebuild_derived();
    return t;
}

bool has_rule(const std::vector<Violation>& v, const char* substr) {
    for (const auto& x : v)
        if (x.rule.find(substr) != std::string::npos) return true;
    return false;
}

struct TempFile {
    std::string path;
    explicit TempFile(const char* name) {
        path = (std::filesystem::temp_directory_path() /
                (std::string("lodgs_scene_") + name))
                   .string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

bool trees_bit_equal(const LoDTree& a, const LoDTree& b) {
    auto eq_f = [](const std::vector<float>& x, const std::vector<float>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::bit_cast<std::uint32_t>(x[i]) !=
                std::bit_cast<std::uint32_t>(y[i]))
                return false;
        return true;
    };
    return eq_f(a.mean_x, b.mean_x) && eq_f(a.mean_y, b.mean_y) &&
           eq_f(a.mean_z, b.mean_z) && eq_f(a.scale_x, b.scale_x) &&
           eq_f(a.scale_y, b.scale_y) && eq_f(a.scale_z, b.scale_z) &&
           eq_f(a.quat_w, b.quat_w) && eq_f(a.quat_x, b.quat_x) &&
           eq_f(a.quat_y, b.quat_y) && eq_f(a.quat_z, b.quat_z) &&
           eq_f(a.opacity, b.opacity) && eq_f(a.color_r, b.color_r) &&
           eq_f(a.color_g, b.color_g) && eq_f(a.color_b, b.color_b) &&
           a.parent == b.parent && a.leaf == b.leaf &&
           a.level_offsets == b.level_offsets &&
           std::bit_cast<std::uint32_t>(a.shrink_factor) ==
               std::bit_cast<std::uint32_t>(b.shrink_factor);
}

}  // namespace

TEST_CASE("well-formed two-level tree validates clean") {
    CHECK(validate_tree(two_level_tree()).empty());
}

TEST_CASE("negative scale component is flagged") {
    LoDTree t = two_level_tree();
    t.scale_y[1] = -1.f;
    const auto v = validate_tree(t);
    REQUIRE(!v.empty());
    CHECK(has_rule(v, "scale > 0"));
    CHECK(v[0].node == 1);
}

TEST_CASE("parent must sit exactly one level up") {
    LoDTree t;
    t.push_node(simple_node(0, kRootParent, false));
    t.push_node(simple_node(1, 0, false));
    t.push_node(simple_node(2, 1, false));
    t.push_node(simple_node(3, 2, true));
    t.rebuild_derived();
    REQUIRE(validate_tree(t).empty());

    t.parent[3] = 1;  // level-3 node pointing at a level-1 parent
    t.rebuild_derived();
    const auto v = validate_tree(t);
    CHECK(has_rule(v, "parent level"));
}

TEST_CASE("leaf flag must match childlessness") {
    LoDTree t = two_level_tree();
    t.leaf[2] = 0;
    CHECK(has_rule(validate_tree(t), "leaf iff childless"));
    t.leaf[2] = 1;
    t.leaf[0] = 1;
    CHECK(has_rule(validate_tree(t), "leaf iff childless"));
}

TEST_CASE("unit quaternion, opacity and color ranges are enforced") {
    LoDTree t = two_level_tree();
    t.quat_w[1] = 2.f;
    CHECK(has_rule(validate_tree(t), "unit quaternion"));

    t = two_level_tree();
    t.opacity[0] = 0.f;
    CHECK(has_rule(validate_tree(t), "opacity"));

    t = two_level_tree();
    t.color_b[2] = 1.5f;
    CHECK(has_rule(validate_tree(t), "color"));

    t = two_level_tree();
    t.mean_z[1] = std::numeric_limits<float>::quiet_NaN();
    CHECK(has_rule(validate_tree(t), "finite"));
}

TEST_CASE("push_node rejects level gaps") {
    LoDTree t;
    t.push_node(simple_node(0, kRootParent, true));
    CHECK_THROWS_AS(t.push_node(simple_node(2, 0, true)), ValidationError);
}

TEST_CASE("camera validation") {
    Camera ok = test::front_camera(64, 64);
    CHECK(validate_camera(ok).empty());

    Camera bad = ok;
    bad.world_to_cam_rotation[0] = 2.0;
    CHECK(!validate_camera(bad).empty());

    bad = ok;
    bad.near = 5.0;
    bad.far = 1.0;
    CHECK(!validate_camera(bad).empty());

    bad = ok;
    bad.fx = 0.0;
    CHECK(!validate_camera(bad).empty());
    CHECK_THROWS_AS(require_valid(bad), ValidationError);
}

TEST_CASE("binary round-trip: single node") {
    LoDTree t;
    auto n = simple_node(0, kRootParent, true);
    n.mean = {0.1f, -2.25f, 7.5f};
    n.opacity = 0.73f;
    t.push_node(n);
    t.rebuild_derived();

    TempFile f("one.lodgs");
    save_scene(t, f.path);
    CHECK(trees_bit_equal(t, load_scene(f.path)));
}

TEST_CASE("binary round-trip: built tree with five levels") {
    const LoDTree t = test::make_tree(41, 5, 3, 0.6f, 4, 4);
    REQUIRE(t.depth() == 5);
    TempFile f("big.lodgs");
    save_scene(t, f.path);
    const LoDTree back = load_scene(f.path);
    CHECK(trees_bit_equal(t, back));
    CHECK(back.levels.size() == back.node_count());  // derived data rebuilt
}

TEST_CASE("json round-trip is bit-exact too") {
    const LoDTree t = test::make_tree(9, 2, 8, 0.5f, 2, 2);
    TempFile f("tree.json");
    save_scene(t, f.path);
    CHECK(trees_bit_equal(t, load_scene(f.path)));
}

TEST_CASE("wrong magic is rejected") {
    TempFile f("magic.lodgs");
    {
        std::ofstream out(f.path, std::ios::binary);
        out << "NOPE" << std::string(64, '\0');
    }
    CHECK_THROWS_WITH_AS(load_scene(f.path),
                         doctest::Contains("bad magic"), FormatError);
}

TEST_CASE("truncated file is rejected") {
    const LoDTree t = two_level_tree();
    TempFile f("trunc.lodgs");
    save_scene(t, f.path);
    const auto full = std::filesystem::file_size(f.path);
    std::filesystem::resize_file(f.path, full - 7);
    CHECK_THROWS_AS(load_scene(f.path), FormatError);
}

TEST_CASE("save refuses an invalid tree") {
    LoDTree t = two_level_tree();
    t.opacity[0] = 2.f;
    TempFile f("invalid.lodgs");
    CHECK_THROWS_AS(save_scene(t, f.path), ValidationError);
}

TEST_CASE("round-trip bijection over seeded trees") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const LoDTree t = test::make_tree(seed, 1 + seed % 4, 1 + seed % 8,
                                          0.3f + 0.05f * (seed % 8), 2, 2);
        TempFile f("seeded.lodgs");
        save_scene(t, f.path);
        CHECK(trees_bit_equal(t, load_scene(f.path)));
    }
}

TEST_CASE("builder output always validates") {
    for (std::uint64_t seed = 100; seed < 106; ++seed)
        CHECK(validate_tree(test::make_tree(seed, 2 + seed % 3)).empty());
}
