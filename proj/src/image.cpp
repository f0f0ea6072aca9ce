// SPDX-License-Identifier: Apache-2.0
#include "lodgs/image.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "lodgs/core.hpp"

namespace lodgs {

void save_ppm(const Image& img, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for write: " + path);
    os << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> row(std::size_t(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        const float* src = img.pixel(0, y);
        for (std::size_t i = 0; i < row.size(); ++i) {
            float v = src[i];
            v = v < 0.f ? 0.f : (v > 1.f ? 1.f : v);
            row[i] = std::uint8_t(std::floor(v * 255.f + 0.5f));
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 std::streamsize(row.size()));
    }
    if (!os) throw IoError("write failed: " + path);
}

Image load_ppm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for read: " + path);
    std::string magic;
    is >> magic;
    if (magic != "P6") throw FormatError("bad magic (want P6)");
    int w = 0, h = 0, maxval = 0;
    is >> w >> h >> maxval;
    if (!is || w < 1 || h < 1) throw FormatError("bad PPM header");
    if (maxval != 255) throw FormatError("unsupported PPM maxval");
    is.get();  // single whitespace after header

    Image img = Image::black(w, h);
    std::vector<std::uint8_t> row(std::size_t(w) * 3);
    for (int y = 0; y < h; ++y) {
        is.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size()));
        if (std::size_t(is.gcount()) != row.size())
            throw FormatError("truncated PPM payload");
        float* dst = img.pixel(0, y);
        for (std::size_t i = 0; i < row.size(); ++i)
            dst[i] = float(row[i]) / 255.f;
    }
    return img;
}

}  // namespace lodgs
