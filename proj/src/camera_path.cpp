// SPDX-License-Identifier: Apache-2.0
#include "lodgs/camera_path.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <nlohmann/json.hpp>

#include "json_util.hpp"

namespace lodgs {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::array<double, 4> quat_from_rotation(const std::array<double, 9>& m) {
    const double trace = m[0] + m[4] + m[8];
    double w, x, y, z;
    if (trace > 0.0) {
        const double s = std::sqrt(trace + 1.0) * 2.0;
        w = 0.25 * s;
        x = (m[7] - m[5]) / s;
        y = (m[2] - m[6]) / s;
        z = (m[3] - m[1]) / s;
    } else if (m[0] > m[4] && m[0] > m[8]) {
        const double s = std::sqrt(1.0 + m[0] - m[4] - m[8]) * 2.0;
        w = (m[7] - m[5]) / s;
        x = 0.25 * s;
        y = (m[1] + m[3]) / s;
        z = (m[2] + m[6]) / s;
    } else if (m[4] > m[8]) {
        const double s = std::sqrt(1.0 + m[4] - m[0] - m[8]) * 2.0;
        w = (m[2] - m[6]) / s;
        x = (m[1] + m[3]) / s;
        y = 0.25 * s;
        z = (m[5] + m[7]) / s;
    } else {
        const double s = std::sqrt(1.0 + m[8] - m[0] - m[4]) * 2.0;
        w = (m[3] - m[1]) / s;
        x = (m[2] + m[6]) / s;
        y = (m[5] + m[7]) / s;
        z = 0.25 * s;
    }
    return {w, x, y, z};
}

std::array<double, 4> slerp(std::array<double, 4> a, std::array<double, 4> b,
                            double t) {
    double d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    if (d < 0.0) {
        for (double& v : b) v = -v;
        d = -d;
    }
    double ka, kb;
    if (d > 0.9995) {
        ka = 1.0 - t;  // nearly parallel: lerp, normalized below
        kb = t;
    } else {
        const double th = std::acos(std::clamp(d, -1.0, 1.0));
        const double sth = std::sin(th);
        ka = std::sin((1.0 - t) * th) / sth;
        kb = std::sin(t * th) / sth;
    }
    std::array<double, 4> q = {ka * a[0] + kb * b[0], ka * a[1] + kb * b[1],
                               ka * a[2] + kb * b[2], ka * a[3] + kb * b[3]};
    const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] +
                               q[3] * q[3]);
    for (double& v : q) v /= n;
    return q;
}

Camera camera_from_json(const json& j) {
    Camera c;
    for (const char* key : {"width", "height", "fx", "fy", "cx", "cy"})
        if (!j.contains(key))
            throw FormatError(std::string("missing camera field: ") + key);
    try {
        c.width = j.at("width").get<std::uint32_t>();
        c.height = j.at("height").get<std::uint32_t>();
        c.fx = j.at("fx").get<double>();
        c.fy = j.at("fy").get<double>();
        c.cx = j.at("cx").get<double>();
        c.cy = j.at("cy").get<double>();
        if (j.contains("rotation")) {
            const auto r = j.at("rotation");
            if (!r.is_array() || r.size() != 9)
                throw FormatError("camera rotation: need 9 values");
            for (int i = 0; i < 9; ++i)
                c.world_to_cam_rotation[i] = r[i].get<double>();
        }
        if (j.contains("translation")) {
            const auto t = j.at("translation");
            if (!t.is_array() || t.size() != 3)
                throw FormatError("camera translation: need 3 values");
            for (int i = 0; i < 3; ++i)
                c.world_to_cam_translation[i] = t[i].get<double>();
        }
        if (j.contains("near")) c.near = j.at("near").get<double>();
        if (j.contains("far")) c.far = j.at("far").get<double>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad camera field: ") + e.what());
    }
    return c;
}

ordered_json camera_to_json(const Camera& c) {
    ordered_json j;
    j["width"] = c.width;
    j["height"] = c.height;
    j["fx"] = c.fx;
    j["fy"] = c.fy;
    j["cx"] = c.cx;
    j["cy"] = c.cy;
    j["rotation"] = c.world_to_cam_rotation;
    j["translation"] = c.world_to_cam_translation;
    j["near"] = c.near;
    j["far"] = c.far;
    return j;
}

}  // namespace

std::size_t CameraPath::frame_count() const {
    std::size_t n = 1;
    for (std::uint32_t s : samples) n += s;
    return n;
}

std::vector<Camera> CameraPath::sample() const {
    require_valid(*this);
    std::vector<Camera> frames;
    frames.reserve(frame_count());
    for (std::size_t s = 0; s < samples.size(); ++s)
        for (std::uint32_t k = 0; k < samples[s]; ++k)
            frames.push_back(interpolate(keyframes[s], keyframes[s + 1],
                                         double(k) / double(samples[s])));
    frames.push_back(keyframes.back());
    return frames;
}

void require_valid(const CameraPath& path) {
    if (path.keyframes.empty())
        throw ValidationError("camera path: at least one keyframe");
    if (path.samples.size() + 1 != path.keyframes.size())
        throw ValidationError("camera path: need one sample count per segment");
    for (std::uint32_t s : path.samples)
        if (s < 1) throw ValidationError("camera path: sample counts >= 1");
    for (const Camera& c : path.keyframes) require_valid(c);
    for (const Camera& c : path.keyframes)
        if (c.width != path.keyframes[0].width ||
            c.height != path.keyframes[0].height)
            throw ValidationError("camera path: all keyframes share one "
                                  "image size");
}

Camera interpolate(const Camera& a, const Camera& b, double t) {
    if (a.width != b.width || a.height != b.height)
        throw ValidationError("interpolate: image sizes differ");
    const double u = 1.0 - t;
    Camera c;
    c.width = a.width;
    c.height = a.height;
    c.fx = u * a.fx + t * b.fx;
    c.fy = u * a.fy + t * b.fy;
    c.cx = u * a.cx + t * b.cx;
    c.cy = u * a.cy + t * b.cy;
    c.near = u * a.near + t * b.near;
    c.far = u * a.far + t * b.far;
    for (int i = 0; i < 3; ++i)
        c.world_to_cam_translation[i] = u * a.world_to_cam_translation[i] +
                                        t * b.world_to_cam_translation[i];
    const auto q = slerp(quat_from_rotation(a.world_to_cam_rotation),
                         quat_from_rotation(b.world_to_cam_rotation), t);
    const Mat3d r = rotation_matrix(q[0], q[1], q[2], q[3]);
    for (int i = 0; i < 9; ++i) c.world_to_cam_rotation[i] = r.m[i];
    return c;
}

CameraPath load_camera_path(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.contains("keyframes") || !j["keyframes"].is_array())
        throw FormatError("camera path: missing keyframes array");
    CameraPath p;
    for (const json& k : j["keyframes"]) p.keyframes.push_back(camera_from_json(k));
    if (j.contains("samples")) {
        for (const json& s : j["samples"])
            p.samples.push_back(s.get<std::uint32_t>());
    } else if (p.keyframes.size() > 1) {
        p.samples.assign(p.keyframes.size() - 1, 1);
    }
    require_valid(p);
    return p;
}

std::vector<Camera> load_views(const std::string& path) {
    const json j = read_json_file(path);
    const json* arr = nullptr;
    if (j.is_array())
        arr = &j;
    else if (j.contains("views") && j["views"].is_array())
        arr = &j["views"];
    else
        throw FormatError("views file: need a camera array or a views key");
    std::vector<Camera> views;
    for (const json& v : *arr) views.push_back(camera_from_json(v));
    if (views.empty()) throw ValidationError("views file: no cameras");
    for (const Camera& c : views) require_valid(c);
    return views;
}

void save_camera_path(const CameraPath& path, const std::string& file) {
    require_valid(path);
    ordered_json j;
    j["keyframes"] = ordered_json::array();
    for (const Camera& c : path.keyframes) j["keyframes"].push_back(camera_to_json(c));
    j["samples"] = path.samples;
    write_text_file(file, j.dump(2) + "\n");
}

void save_views(const std::vector<Camera>& views, const std::string& file) {
    ordered_json j;
    j["views"] = ordered_json::array();
    for (const Camera& c : views) j["views"].push_back(camera_to_json(c));
    write_text_file(file, j.dump(2) + "\n");
}

}  // namespace lodgs
