// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

#include "lodgs/projection.hpp"
#include "lodgs/scene.hpp"
#include "lodgs/tiles.hpp"

namespace lodgs {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);

// Blend thresholds from the standard pipeline: per-sample opacity cap, the
// minimum opacity a sample must reach to contribute, and the transmittance
// below which a pixel terminates.
inline constexpr double kAlphaCap = 0.99;
inline constexpr double kMinAlpha = 1.0 / 255.0;
inline constexpr double kTermT = 1e-4;

// SoA view over the tree fields the mark kernel reads.
struct NodeArrays {
    const float *mean_x, *mean_y, *mean_z;
    const float *scale_x, *scale_y, *scale_z;
    const float *quat_w, *quat_x, *quat_y, *quat_z;

    static NodeArrays from(const LoDTree& t) {
        return {t.mean_x.data(),  t.mean_y.data(),  t.mean_z.data(),
                t.scale_x.data(), t.scale_y.data(), t.scale_z.data(),
                t.quat_w.data(),  t.quat_x.data(),  t.quat_y.data(),
                t.quat_z.data()};
    }
};

// SoA view over compacted screen-space Gaussians the blend kernel reads,
// indexed by TilePair::gaussian.
struct BlendGaussians {
    const double *mean_x, *mean_y;
    const double *conic_a, *conic_b, *conic_c;
    const double *opacity;
    const double *col_r, *col_g, *col_b;
};

// Writes vis (sphere-frustum) and qpass (vis && z >= near && radius <= tau_r)
// for nodes [begin, end); radius_out, when non-null, additionally records the
// screen radius per node. Every variant produces bit-identical output.
using MarkFn = void (*)(const CameraGeom& geom, const NodeArrays& nodes,
                        std::size_t begin, std::size_t end, double tau_r,
                        std::uint8_t* vis, std::uint8_t* qpass, double* radius_out);

// Blends one tile's sorted pairs into an interleaved-RGB f32 image of row
// stride img_w. kpc_out, when non-null, receives one value per pair: the sum
// over the tile's pixels of alpha * T at that pair (skipped and
// post-termination samples count 0). Every variant produces bit-identical
// pixels and kpc values.
using BlendFn = void (*)(const BlendGaussians& g, const TilePair* pairs,
                         std::size_t n_pairs, const TileSpan& span, int img_w,
                         float* image, double* kpc_out);

struct KernelTable {
    MarkFn mark;
    BlendFn blend;
    Backend backend;
};

// Active table: highest supported variant unless force_kernel_backend said
// otherwise.
const KernelTable& kernels();

bool backend_supported(Backend b);

// Throws ValidationError if unsupported on this machine.
void force_kernel_backend(Backend b);
void reset_kernel_backend();

}  // namespace lodgs
