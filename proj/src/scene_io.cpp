// SPDX-License-Identifier: Apache-2.0
#include "lodgs/scene_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace lodgs {

namespace {

static_assert(std::endian::native == std::endian::little,
              "scene format is little-endian; byte swapping is not implemented");

constexpr char kMagic[4] = {'L', 'D', 'G', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_bytes(std::ofstream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), std::streamsize(n));
}

template <typename T>
void write_pod(std::ofstream& os, T v) {
    write_bytes(os, &v, sizeof v);
}

template <typename T>
void write_vec(std::ofstream& os, const std::vector<T>& v) {
    write_bytes(os, v.data(), v.size() * sizeof(T));
}

void read_bytes(std::ifstream& is, void* p, std::size_t n, const char* what) {
    is.read(static_cast<char*>(p), std::streamsize(n));
    if (std::size_t(is.gcount()) != n)
        throw FormatError(std::string("truncated scene file reading ") + what);
}

template <typename T>
T read_pod(std::ifstream& is, const char* what) {
    T v;
    read_bytes(is, &v, sizeof v, what);
    return v;
}

template <typename T>
void read_vec(std::ifstream& is, std::vector<T>& v, std::size_t n, const char* what) {
    v.resize(n);
    read_bytes(is, v.data(), n * sizeof(T), what);
}

void save_binary(const LoDTree& t, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for write: " + path);

    const std::uint32_t n = std::uint32_t(t.node_count());
    write_bytes(os, kMagic, 4);
    write_pod(os, kVersion);
    write_pod(os, n);
    write_pod(os, std::uint32_t(t.level_count()));
    write_pod(os, t.shrink_factor);

    std::vector<float> buf;
    auto interleave = [&](std::initializer_list<const std::vector<float>*> fields) {
        buf.clear();
        buf.reserve(std::size_t(n) * fields.size());
        for (std::uint32_t i = 0; i < n; ++i)
            for (const auto* f : fields) buf.push_back((*f)[i]);
        write_vec(os, buf);
    };
    interleave({&t.mean_x, &t.mean_y, &t.mean_z});
    interleave({&t.scale_x, &t.scale_y, &t.scale_z});
    interleave({&t.quat_w, &t.quat_x, &t.quat_y, &t.quat_z});
    write_vec(os, t.opacity);
    interleave({&t.color_r, &t.color_g, &t.color_b});
    write_vec(os, t.parent);
    write_vec(os, t.leaf);
    write_vec(os, t.level_offsets);
    if (!os) throw IoError("write failed: " + path);
}

LoDTree load_binary(std::ifstream& is) {
    char magic[4];
    read_bytes(is, magic, 4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("bad magic");
    const auto version = read_pod<std::uint32_t>(is, "version");
    if (version != kVersion)
        throw FormatError("unsupported version " + std::to_string(version));

    LoDTree t;
    const auto n = read_pod<std::uint32_t>(is, "node count");
    const auto n_levels = read_pod<std::uint32_t>(is, "level count");
    t.shrink_factor = read_pod<float>(is, "shrink factor");

    std::vector<float> buf;
    auto deinterleave = [&](std::initializer_list<std::vector<float>*> fields,
                            const char* what) {
        read_vec(is, buf, std::size_t(n) * fields.size(), what);
        for (auto* f : fields) f->resize(n);
        std::size_t k = 0;
        for (std::uint32_t i = 0; i < n; ++i)
            for (auto* f : fields) (*f)[i] = buf[k++];
    };
    deinterleave({&t.mean_x, &t.mean_y, &t.mean_z}, "means");
    deinterleave({&t.scale_x, &t.scale_y, &t.scale_z}, "scales");
    deinterleave({&t.quat_w, &t.quat_x, &t.quat_y, &t.quat_z}, "quaternions");
    read_vec(is, t.opacity, n, "opacity");
    deinterleave({&t.color_r, &t.color_g, &t.color_b}, "colors");
    read_vec(is, t.parent, n, "parents");
    read_vec(is, t.leaf, n, "leaf flags");
    read_vec(is, t.level_offsets, n_levels, "level offsets");
    return t;
}

using json = nlohmann::json;

template <typename T>
json flat(const std::vector<T>& v) {
    return json(v);
}

void save_json(const LoDTree& t, const std::string& path) {
    const std::uint32_t n = std::uint32_t(t.node_count());
    json j;
    j["magic"] = "LDGS";
    j["version"] = kVersion;
    j["node_count"] = n;
    j["level_count"] = std::uint32_t(t.level_count());
    j["shrink_factor"] = t.shrink_factor;

    auto interleaved = [&](std::initializer_list<const std::vector<float>*> fields) {
        json a = json::array();
        for (std::uint32_t i = 0; i < n; ++i)
            for (const auto* f : fields) a.push_back((*f)[i]);
        return a;
    };
    j["means"] = interleaved({&t.mean_x, &t.mean_y, &t.mean_z});
    j["scales"] = interleaved({&t.scale_x, &t.scale_y, &t.scale_z});
    j["quaternions"] = interleaved({&t.quat_w, &t.quat_x, &t.quat_y, &t.quat_z});
    j["opacity"] = flat(t.opacity);
    j["color"] = interleaved({&t.color_r, &t.color_g, &t.color_b});
    j["parents"] = flat(t.parent);
    j["leaf"] = flat(t.leaf);
    j["level_offsets"] = flat(t.level_offsets);

    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open for write: " + path);
    os << j.dump(2) << "\n";
    if (!os) throw IoError("write failed: " + path);
}

LoDTree load_json(std::ifstream& is) {
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("bad scene JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("magic", "") != "LDGS") throw FormatError("bad magic");
    const std::uint32_t version = j.value("version", kVersion);
    if (version != kVersion)
        throw FormatError("unsupported version " + std::to_string(version));

    LoDTree t;
    auto require = [&](const char* key) -> const json& {
        auto it = j.find(key);
        if (it == j.end())
            throw FormatError(std::string("missing scene field: ") + key);
        return *it;
    };

    const auto& opac = require("opacity");
    const std::size_t n = opac.size();
    auto deinterleave = [&](const char* key,
                            std::initializer_list<std::vector<float>*> fields) {
        const auto& a = require(key);
        if (a.size() != n * fields.size())
            throw FormatError(std::string("wrong array length: ") + key);
        for (auto* f : fields) f->resize(n);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (auto* f : fields) (*f)[i] = a[k++].get<float>();
    };
    deinterleave("means", {&t.mean_x, &t.mean_y, &t.mean_z});
    deinterleave("scales", {&t.scale_x, &t.scale_y, &t.scale_z});
    deinterleave("quaternions", {&t.quat_w, &t.quat_x, &t.quat_y, &t.quat_z});
    t.opacity = opac.get<std::vector<float>>();
    deinterleave("color", {&t.color_r, &t.color_g, &t.color_b});
    t.parent = require("parents").get<std::vector<NodeIndex>>();
    t.leaf = require("leaf").get<std::vector<std::uint8_t>>();
    t.level_offsets = require("level_offsets").get<std::vector<std::uint32_t>>();
    t.shrink_factor = require("shrink_factor").get<float>();
    if (t.parent.size() != n || t.leaf.size() != n)
        throw FormatError("wrong array length: parents/leaf");
    return t;
}

}  // namespace

void save_scene(const LoDTree& t, const std::string& path) {
    require_valid(t);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        save_json(t, path);
    else
        save_binary(t, path);
}

LoDTree load_scene(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for read: " + path);

    char head = 0;
    is.get(head);
    while (is && (head == ' ' || head == '\t' || head == '\r' || head == '\n'))
        is.get(head);
    if (!is) throw FormatError("bad magic");
    is.seekg(head == '{' ? std::streamoff(is.tellg()) - 1 : 0);

    LoDTree t = head == '{' ? load_json(is) : load_binary(is);
    require_valid(t);
    t.rebuild_derived();
    return t;
}

}  // namespace lodgs
