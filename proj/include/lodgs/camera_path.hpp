// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lodgs/scene.hpp"

namespace lodgs {

// Keyframed trajectory: piecewise-linear translation and intrinsics,
// spherical-linear rotation. Segment s gets samples[s] frames at
// t = k/samples[s], k = 0..samples[s]-1; the last keyframe is appended once,
// so frame_count() == sum(samples) + 1.
struct CameraPath {
    std::vector<Camera> keyframes;
    std::vector<std::uint32_t> samples;  // one per segment, each >= 1

    std::size_t frame_count() const;
    std::vector<Camera> sample() const;
};

void require_valid(const CameraPath& path);

Camera interpolate(const Camera& a, const Camera& b, double t);

CameraPath load_camera_path(const std::string& path);
std::vector<Camera> load_views(const std::string& path);

void save_camera_path(const CameraPath& path, const std::string& file);
void save_views(const std::vector<Camera>& views, const std::string& file);

}  // namespace lodgs
