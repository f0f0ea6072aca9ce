// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace lodgs {

// Interleaved RGB, f32 per channel in [0,1].
struct Image {
    int width = 0, height = 0;
    std::vector<float> rgb;

    static Image black(int w, int h) {
        return {w, h, std::vector<float>(std::size_t(w) * h * 3, 0.f)};
    }
    float* pixel(int x, int y) {
        return rgb.data() + (std::size_t(y) * width + x) * 3;
    }
    const float* pixel(int x, int y) const {
        return rgb.data() + (std::size_t(y) * width + x) * 3;
    }
};

// Binary PPM (P6, maxval 255). Channels clamp to [0,1] and round half-up.
void save_ppm(const Image& img, const std::string& path);
Image load_ppm(const std::string& path);

}  // namespace lodgs
