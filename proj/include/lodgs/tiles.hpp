// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace lodgs {

inline constexpr int kTileW = 16;
inline constexpr int kTileH = 16;

struct TileGrid {
    int tiles_x = 0, tiles_y = 0;

    static TileGrid make(int width, int height) {
        return {(width + kTileW - 1) / kTileW, (height + kTileH - 1) / kTileH};
    }
    int n_tile() const { return tiles_x * tiles_y; }
    std::uint32_t tile_id(int tx, int ty) const {
        return std::uint32_t(ty) * std::uint32_t(tiles_x) + std::uint32_t(tx);
    }
};

struct TilePair {
    std::uint32_t tile = 0;
    float depth = 0.f;          // camera-space z
    std::uint32_t gaussian = 0; // index into the projected list
    friend bool operator==(const TilePair&, const TilePair&) = default;
};

// Pixel rectangle of one tile clipped to the image; x0, y0 stay on the
// 16-pixel lattice so vector lanes line up with (x - x0) % 4.
struct TileSpan {
    int x0 = 0, y0 = 0, w = 0, h = 0;
};

}  // namespace lodgs
