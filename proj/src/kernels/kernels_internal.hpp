// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "lodgs/kernels.hpp"

namespace lodgs::detail {

void mark_scalar(const CameraGeom& geom, const NodeArrays& nodes, std::size_t begin,
                 std::size_t end, double tau_r, std::uint8_t* vis,
                 std::uint8_t* qpass, double* radius_out);

void blend_scalar(const BlendGaussians& g, const TilePair* pairs,
                  std::size_t n_pairs, const TileSpan& span, int img_w,
                  float* image, double* kpc_out);

#if defined(__x86_64__)
void mark_avx2(const CameraGeom& geom, const NodeArrays& nodes, std::size_t begin,
               std::size_t end, double tau_r, std::uint8_t* vis,
               std::uint8_t* qpass, double* radius_out);

void blend_avx2(const BlendGaussians& g, const TilePair* pairs,
                std::size_t n_pairs, const TileSpan& span, int img_w,
                float* image, double* kpc_out);
#endif

}  // namespace lodgs::detail
