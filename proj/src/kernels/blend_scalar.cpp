// SPDX-License-Identifier: Apache-2.0
#include <vector>

#include "lodgs/kernels.hpp"
#include "kernels/fastexp.hpp"

namespace lodgs::detail {

// Reference blender. The vector variant runs four pixels per step with the
// identical per-sample arithmetic; kpc keeps one accumulator per pixel lane
// (x - x0) % 4 and reduces them in a fixed order at the end, so both
// variants see the same addition trees.
void blend_scalar(const BlendGaussians& g, const TilePair* pairs,
                  std::size_t n_pairs, const TileSpan& span, int img_w,
                  float* image, double* kpc_out) {
    thread_local std::vector<double> kpc_acc;
    if (kpc_out) kpc_acc.assign(n_pairs * 4, 0.0);

    for (int y = span.y0; y < span.y0 + span.h; ++y) {
        const double py = double(y) + 0.5;
        for (int x = span.x0; x < span.x0 + span.w; ++x) {
            const double px = double(x) + 0.5;
            const int lane = (x - span.x0) & 3;
            double T = 1.0, cr = 0.0, cg = 0.0, cb = 0.0;
            for (std::size_t j = 0; j < n_pairs; ++j) {
                const std::uint32_t k = pairs[j].gaussian;
                const double dx = px - g.mean_x[k];
                const double dy = py - g.mean_y[k];
                const double t1 = (g.conic_a[k] * dx) * dx;
                const double t2 = (g.conic_c[k] * dy) * dy;
                const double t3 = (g.conic_b[k] * dx) * dy;
                const double power = -0.5 * (t1 + t2) - t3;
                const double alpha =
                    std::min(g.opacity[k] * exp_mx(power), kAlphaCap);
                if (alpha < kMinAlpha) continue;
                const double w = alpha * T;
                cr += g.col_r[k] * w;
                cg += g.col_g[k] * w;
                cb += g.col_b[k] * w;
                if (kpc_out) kpc_acc[j * 4 + lane] += w;
                T *= 1.0 - alpha;
                if (T < kTermT) break;
            }
            float* out = image + (std::size_t(y) * img_w + x) * 3;
            out[0] = float(cr);
            out[1] = float(cg);
            out[2] = float(cb);
        }
    }

    if (kpc_out)
        for (std::size_t j = 0; j < n_pairs; ++j)
            kpc_out[j] = (kpc_acc[j * 4 + 0] + kpc_acc[j * 4 + 1]) +
                         (kpc_acc[j * 4 + 2] + kpc_acc[j * 4 + 3]);
}

}  // namespace lodgs::detail
