// SPDX-License-Identifier: Apache-2.0

// Four-lane double transcription of mark_core and blend_scalar. Built with
// -mavx2 and no FMA: every multiply and add here must round exactly like the
// scalar code, and fused ops would not. Divide and square root are IEEE
// correctly rounded in both paths, so op-for-op order equality gives
// bit-equal results.

#if defined(__x86_64__)

#include <immintrin.h>

#include <vector>

#include "kernels/fastexp.hpp"
#include "kernels/kernels_internal.hpp"

namespace lodgs::detail {

namespace {

inline __m256d load4f(const float* p) {
    return _mm256_cvtps_pd(_mm_loadu_ps(p));
}

// fastexp.hpp, lane-parallel. Same constants, same operation order.
inline __m256d exp_mx4(__m256d x) {
    x = _mm256_max_pd(x, _mm256_set1_pd(kExpClamp));
    const __m256d t = _mm256_mul_pd(x, _mm256_set1_pd(kInvLn2));
    const __m256d magic = _mm256_set1_pd(kRoundMagic);
    const __m256d u = _mm256_add_pd(t, magic);
    const __m256d fn = _mm256_sub_pd(u, magic);
    const __m256d r1 = _mm256_sub_pd(x, _mm256_mul_pd(fn, _mm256_set1_pd(kLn2Hi)));
    const __m256d r = _mm256_sub_pd(r1, _mm256_mul_pd(fn, _mm256_set1_pd(kLn2Lo)));
    __m256d p = _mm256_set1_pd(kExpPoly[12]);
    for (int k = 11; k >= 0; --k)
        p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(kExpPoly[k]));
    const __m128i n32 = _mm256_cvtpd_epi32(fn);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i bits =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

}  // namespace

void mark_avx2(const CameraGeom& g, const NodeArrays& n, std::size_t begin,
               std::size_t end, double tau_r, std::uint8_t* vis,
               std::uint8_t* qpass, double* radius_out) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d three = _mm256_set1_pd(3.0);
    const __m256d dilation = _mm256_set1_pd(0.3);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d zmin = _mm256_set1_pd(1e-12);
    const __m256d taur = _mm256_set1_pd(tau_r);
    const __m256d znear = _mm256_set1_pd(g.znear);
    __m256d rotv[9], planev[6][4];
    for (int i = 0; i < 9; ++i) rotv[i] = _mm256_set1_pd(g.rot[i]);
    for (int p = 0; p < 6; ++p)
        for (int c = 0; c < 4; ++c) planev[p][c] = _mm256_set1_pd(g.planes[p][c]);
    const __m256d tr0 = _mm256_set1_pd(g.trans[0]);
    const __m256d tr1 = _mm256_set1_pd(g.trans[1]);
    const __m256d tr2 = _mm256_set1_pd(g.trans[2]);
    const __m256d fxv = _mm256_set1_pd(g.fx);
    const __m256d fyv = _mm256_set1_pd(g.fy);

    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
        const __m256d x = load4f(n.mean_x + i);
        const __m256d y = load4f(n.mean_y + i);
        const __m256d z = load4f(n.mean_z + i);
        const __m256d tx = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(rotv[0], x), _mm256_mul_pd(rotv[1], y)),
            _mm256_add_pd(_mm256_mul_pd(rotv[2], z), tr0));
        const __m256d ty = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(rotv[3], x), _mm256_mul_pd(rotv[4], y)),
            _mm256_add_pd(_mm256_mul_pd(rotv[5], z), tr1));
        const __m256d tz = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(rotv[6], x), _mm256_mul_pd(rotv[7], y)),
            _mm256_add_pd(_mm256_mul_pd(rotv[8], z), tr2));

        const __m256d sx = load4f(n.scale_x + i);
        const __m256d sy = load4f(n.scale_y + i);
        const __m256d sz = load4f(n.scale_z + i);
        const __m256d smax = _mm256_max_pd(_mm256_max_pd(sx, sy), sz);
        const __m256d r3 = _mm256_mul_pd(three, smax);
        const __m256d neg_r3 = _mm256_sub_pd(zero, r3);
        __m256d vism = _mm256_cmp_pd(zero, zero, _CMP_EQ_OQ);  // all ones
        for (int p = 0; p < 6; ++p) {
            const __m256d dist = _mm256_add_pd(
                _mm256_add_pd(_mm256_mul_pd(planev[p][0], tx),
                              _mm256_mul_pd(planev[p][1], ty)),
                _mm256_add_pd(_mm256_mul_pd(planev[p][2], tz), planev[p][3]));
            vism = _mm256_and_pd(vism, _mm256_cmp_pd(dist, neg_r3, _CMP_GE_OQ));
        }
        const __m256d zokm = _mm256_cmp_pd(tz, znear, _CMP_GE_OQ);

        const __m256d w = load4f(n.quat_w + i);
        const __m256d qx = load4f(n.quat_x + i);
        const __m256d qy = load4f(n.quat_y + i);
        const __m256d qz = load4f(n.quat_z + i);
        const __m256d qn = _mm256_sqrt_pd(_mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(w, w), _mm256_mul_pd(qx, qx)),
            _mm256_add_pd(_mm256_mul_pd(qy, qy), _mm256_mul_pd(qz, qz))));
        const __m256d iw = _mm256_div_pd(w, qn);
        const __m256d ix = _mm256_div_pd(qx, qn);
        const __m256d iy = _mm256_div_pd(qy, qn);
        const __m256d iz = _mm256_div_pd(qz, qn);
        const __m256d m00 = _mm256_sub_pd(
            one, _mm256_mul_pd(two, _mm256_add_pd(_mm256_mul_pd(iy, iy),
                                                  _mm256_mul_pd(iz, iz))));
        const __m256d m01 = _mm256_mul_pd(
            two, _mm256_sub_pd(_mm256_mul_pd(ix, iy), _mm256_mul_pd(iw, iz)));
        const __m256d m02 = _mm256_mul_pd(
            two, _mm256_add_pd(_mm256_mul_pd(ix, iz), _mm256_mul_pd(iw, iy)));
        const __m256d m10 = _mm256_mul_pd(
            two, _mm256_add_pd(_mm256_mul_pd(ix, iy), _mm256_mul_pd(iw, iz)));
        const __m256d m11 = _mm256_sub_pd(
            one, _mm256_mul_pd(two, _mm256_add_pd(_mm256_mul_pd(ix, ix),
                                                  _mm256_mul_pd(iz, iz))));
        const __m256d m12 = _mm256_mul_pd(
            two, _mm256_sub_pd(_mm256_mul_pd(iy, iz), _mm256_mul_pd(iw, ix)));
        const __m256d m20 = _mm256_mul_pd(
            two, _mm256_sub_pd(_mm256_mul_pd(ix, iz), _mm256_mul_pd(iw, iy)));
        const __m256d m21 = _mm256_mul_pd(
            two, _mm256_add_pd(_mm256_mul_pd(iy, iz), _mm256_mul_pd(iw, ix)));
        const __m256d m22 = _mm256_sub_pd(
            one, _mm256_mul_pd(two, _mm256_add_pd(_mm256_mul_pd(ix, ix),
                                                  _mm256_mul_pd(iy, iy))));

        const __m256d v00 = _mm256_mul_pd(m00, sx), v01 = _mm256_mul_pd(m01, sy),
                      v02 = _mm256_mul_pd(m02, sz);
        const __m256d v10 = _mm256_mul_pd(m10, sx), v11 = _mm256_mul_pd(m11, sy),
                      v12 = _mm256_mul_pd(m12, sz);
        const __m256d v20 = _mm256_mul_pd(m20, sx), v21 = _mm256_mul_pd(m21, sy),
                      v22 = _mm256_mul_pd(m22, sz);
        auto dot3 = [](__m256d a0, __m256d a1, __m256d a2, __m256d b0, __m256d b1,
                       __m256d b2) {
            return _mm256_add_pd(
                _mm256_add_pd(_mm256_mul_pd(a0, b0), _mm256_mul_pd(a1, b1)),
                _mm256_mul_pd(a2, b2));
        };
        const __m256d s00 = dot3(v00, v01, v02, v00, v01, v02);
        const __m256d s01 = dot3(v00, v01, v02, v10, v11, v12);
        const __m256d s02 = dot3(v00, v01, v02, v20, v21, v22);
        const __m256d s11 = dot3(v10, v11, v12, v10, v11, v12);
        const __m256d s12 = dot3(v10, v11, v12, v20, v21, v22);
        const __m256d s22 = dot3(v20, v21, v22, v20, v21, v22);

        const __m256d b00 = dot3(rotv[0], rotv[1], rotv[2], s00, s01, s02);
        const __m256d b01 = dot3(rotv[0], rotv[1], rotv[2], s01, s11, s12);
        const __m256d b02 = dot3(rotv[0], rotv[1], rotv[2], s02, s12, s22);
        const __m256d b10 = dot3(rotv[3], rotv[4], rotv[5], s00, s01, s02);
        const __m256d b11 = dot3(rotv[3], rotv[4], rotv[5], s01, s11, s12);
        const __m256d b12 = dot3(rotv[3], rotv[4], rotv[5], s02, s12, s22);
        const __m256d b20 = dot3(rotv[6], rotv[7], rotv[8], s00, s01, s02);
        const __m256d b21 = dot3(rotv[6], rotv[7], rotv[8], s01, s11, s12);
        const __m256d b22 = dot3(rotv[6], rotv[7], rotv[8], s02, s12, s22);
        const __m256d c00 = dot3(b00, b01, b02, rotv[0], rotv[1], rotv[2]);
        const __m256d c01 = dot3(b00, b01, b02, rotv[3], rotv[4], rotv[5]);
        const __m256d c02 = dot3(b00, b01, b02, rotv[6], rotv[7], rotv[8]);
        const __m256d c11 = dot3(b10, b11, b12, rotv[3], rotv[4], rotv[5]);
        const __m256d c12 = dot3(b10, b11, b12, rotv[6], rotv[7], rotv[8]);
        const __m256d c22 = dot3(b20, b21, b22, rotv[6], rotv[7], rotv[8]);

        const __m256d zc = _mm256_max_pd(tz, zmin);
        const __m256d inv_z = _mm256_div_pd(one, zc);
        const __m256d inv_z2 = _mm256_mul_pd(inv_z, inv_z);
        const __m256d j00 = _mm256_mul_pd(fxv, inv_z);
        const __m256d j02 = _mm256_mul_pd(
            _mm256_sub_pd(zero, _mm256_mul_pd(fxv, tx)), inv_z2);
        const __m256d j11 = _mm256_mul_pd(fyv, inv_z);
        const __m256d j12 = _mm256_mul_pd(
            _mm256_sub_pd(zero, _mm256_mul_pd(fyv, ty)), inv_z2);

        auto mad2 = [](__m256d a, __m256d b, __m256d c, __m256d d) {
            return _mm256_add_pd(_mm256_mul_pd(a, b), _mm256_mul_pd(c, d));
        };
        const __m256d t00 = mad2(j00, c00, j02, c02);
        const __m256d t01 = mad2(j00, c01, j02, c12);
        const __m256d t02 = mad2(j00, c02, j02, c22);
        const __m256d t11 = mad2(j11, c11, j12, c12);
        const __m256d t12 = mad2(j11, c12, j12, c22);
        const __m256d ca = _mm256_add_pd(mad2(t00, j00, t02, j02), dilation);
        const __m256d cb = mad2(t01, j11, t02, j12);
        const __m256d cc = _mm256_add_pd(mad2(t11, j11, t12, j12), dilation);

        const __m256d det =
            _mm256_sub_pd(_mm256_mul_pd(ca, cc), _mm256_mul_pd(cb, cb));
        const __m256d mid = _mm256_mul_pd(half, _mm256_add_pd(ca, cc));
        const __m256d disc = _mm256_sqrt_pd(
            _mm256_max_pd(_mm256_sub_pd(_mm256_mul_pd(mid, mid), det), zero));
        const __m256d lmax = _mm256_add_pd(mid, disc);
        const __m256d radius = _mm256_mul_pd(three, _mm256_sqrt_pd(lmax));

        const __m256d qm = _mm256_and_pd(
            _mm256_and_pd(vism, zokm), _mm256_cmp_pd(radius, taur, _CMP_LE_OQ));

        const int vbits = _mm256_movemask_pd(vism);
        const int qbits = _mm256_movemask_pd(qm);
        for (int l = 0; l < 4; ++l) {
            vis[i + l] = std::uint8_t((vbits >> l) & 1);
            qpass[i + l] = std::uint8_t((qbits >> l) & 1);
        }
        if (radius_out) _mm256_storeu_pd(radius_out + i, radius);
    }
    if (i < end) mark_scalar(g, n, i, end, tau_r, vis, qpass, radius_out);
}

namespace {

// One mul/add chain per sample, identical to blend_scalar; a*dx then *dx etc.
inline __m256d blend_power(__m256d ca, __m256d cb, __m256d cc, __m256d dx,
                           __m256d dy) {
    const __m256d t1 = _mm256_mul_pd(_mm256_mul_pd(ca, dx), dx);
    const __m256d t2 = _mm256_mul_pd(_mm256_mul_pd(cc, dy), dy);
    const __m256d t3 = _mm256_mul_pd(_mm256_mul_pd(cb, dx), dy);
    return _mm256_sub_pd(
        _mm256_mul_pd(_mm256_set1_pd(-0.5), _mm256_add_pd(t1, t2)), t3);
}

}  // namespace

void blend_avx2(const BlendGaussians& g, const TilePair* pairs,
                std::size_t n_pairs, const TileSpan& span, int img_w,
                float* image, double* kpc_out) {
    thread_local std::vector<double> kpc_acc;
    if (kpc_out) kpc_acc.assign(n_pairs * 4, 0.0);

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d cap = _mm256_set1_pd(kAlphaCap);
    const __m256d min_alpha = _mm256_set1_pd(kMinAlpha);
    const __m256d term = _mm256_set1_pd(kTermT);
    const __m256d lane_idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

    for (int y = 0; y < span.h; ++y) {
        const double py = double(span.y0 + y) + 0.5;
        const __m256d pyv = _mm256_set1_pd(py);
        for (int cx = 0; cx < span.w; cx += 4) {
            const int lanes = span.w - cx >= 4 ? 4 : span.w - cx;
            const int x_base = span.x0 + cx;
            const __m256d pxv = _mm256_add_pd(
                _mm256_set1_pd(double(x_base) + 0.5), lane_idx);
            __m256d alive =
                _mm256_cmp_pd(lane_idx, _mm256_set1_pd(double(lanes)), _CMP_LT_OQ);
            __m256d T = one;
            __m256d cr = _mm256_setzero_pd();
            __m256d cg = _mm256_setzero_pd();
            __m256d cb = _mm256_setzero_pd();

            for (std::size_t j = 0; j < n_pairs; ++j) {
                const std::uint32_t k = pairs[j].gaussian;
                const __m256d dx = _mm256_sub_pd(pxv, _mm256_set1_pd(g.mean_x[k]));
                const __m256d dy = _mm256_sub_pd(pyv, _mm256_set1_pd(g.mean_y[k]));
                const __m256d power =
                    blend_power(_mm256_set1_pd(g.conic_a[k]),
                                _mm256_set1_pd(g.conic_b[k]),
                                _mm256_set1_pd(g.conic_c[k]), dx, dy);
                const __m256d alpha = _mm256_min_pd(
                    _mm256_mul_pd(_mm256_set1_pd(g.opacity[k]), exp_mx4(power)),
                    cap);
                const __m256d contrib = _mm256_and_pd(
                    alive, _mm256_cmp_pd(alpha, min_alpha, _CMP_GE_OQ));
                if (_mm256_movemask_pd(contrib) == 0) continue;

                const __m256d w =
                    _mm256_and_pd(_mm256_mul_pd(alpha, T), contrib);
                cr = _mm256_add_pd(cr, _mm256_mul_pd(_mm256_set1_pd(g.col_r[k]), w));
                cg = _mm256_add_pd(cg, _mm256_mul_pd(_mm256_set1_pd(g.col_g[k]), w));
                cb = _mm256_add_pd(cb, _mm256_mul_pd(_mm256_set1_pd(g.col_b[k]), w));
                if (kpc_out) {
                    double* acc = kpc_acc.data() + j * 4;
                    _mm256_storeu_pd(acc, _mm256_add_pd(_mm256_loadu_pd(acc), w));
                }
                const __m256d t_new =
                    _mm256_mul_pd(T, _mm256_sub_pd(one, alpha));
                T = _mm256_blendv_pd(T, t_new, contrib);
                alive = _mm256_and_pd(alive, _mm256_cmp_pd(T, term, _CMP_GE_OQ));
                if (_mm256_movemask_pd(alive) == 0) break;
            }

            alignas(32) double out_r[4], out_g[4], out_b[4];
            _mm256_store_pd(out_r, cr);
            _mm256_store_pd(out_g, cg);
            _mm256_store_pd(out_b, cb);
            float* row = image + (std::size_t(span.y0 + y) * img_w + x_base) * 3;
            for (int l = 0; l < lanes; ++l) {
                row[l * 3 + 0] = float(out_r[l]);
                row[l * 3 + 1] = float(out_g[l]);
                row[l * 3 + 2] = float(out_b[l]);
            }
        }
    }

    if (kpc_out)
        for (std::size_t j = 0; j < n_pairs; ++j)
            kpc_out[j] = (kpc_acc[j * 4 + 0] + kpc_acc[j * 4 + 1]) +
                         (kpc_acc[j * 4 + 2] + kpc_acc[j * 4 + 3]);
}

}  // namespace lodgs::detail

#endif  // __x86_64__
