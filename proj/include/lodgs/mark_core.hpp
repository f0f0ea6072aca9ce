// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "lodgs/projection.hpp"

namespace lodgs {

// Everything the filter predicate and the full projection share. The vector
// kernels transcribe this sequence operation for operation; any edit here
// must be mirrored there or the bit-equality contract between kernel
// variants breaks. No fused multiply-adds for the same reason.
struct MarkOut {
    double tx, ty, tz;        // camera-space center
    double a, b, c;           // cov2d entries [[a,b],[b,c]]
    double lambda_max, lambda_min;
    double radius;
    bool vis, z_ok, qpass;
};

inline MarkOut mark_core(const CameraGeom& g, float mx, float my, float mz,
                         float sx, float sy, float sz, float qw, float qx,
                         float qy, float qz, double tau_r) {
    MarkOut o;
    const double x = double(mx), y = double(my), z = double(mz);
    o.tx = (g.rot[0] * x + g.rot[1] * y) + (g.rot[2] * z + g.trans[0]);
    o.ty = (g.rot[3] * x + g.rot[4] * y) + (g.rot[5] * z + g.trans[1]);
    o.tz = (g.rot[6] * x + g.rot[7] * y) + (g.rot[8] * z + g.trans[2]);

    const double smax = std::max(std::max(double(sx), double(sy)), double(sz));
    const double r3 = 3.0 * smax;
    bool vis = true;
    for (int p = 0; p < 6; ++p) {
        const double dist = (g.planes[p][0] * o.tx + g.planes[p][1] * o.ty) +
                            (g.planes[p][2] * o.tz + g.planes[p][3]);
        vis = vis && dist >= -r3;
    }
    o.vis = vis;
    o.z_ok = o.tz >= g.znear;

    // R(q) with explicit normalization; quaternions are only unit to 1e-6.
    const double w = double(qw), xq = double(qx), yq = double(qy), zq = double(qz);
    const double qn = std::sqrt(((w * w + xq * xq) + (yq * yq + zq * zq)));
    const double iw = w / qn, ix = xq / qn, iy = yq / qn, iz = zq / qn;
    const double m00 = 1.0 - 2.0 * (iy * iy + iz * iz);
    const double m01 = 2.0 * (ix * iy - iw * iz);
    const double m02 = 2.0 * (ix * iz + iw * iy);
    const double m10 = 2.0 * (ix * iy + iw * iz);
    const double m11 = 1.0 - 2.0 * (ix * ix + iz * iz);
    const double m12 = 2.0 * (iy * iz - iw * ix);
    const double m20 = 2.0 * (ix * iz - iw * iy);
    const double m21 = 2.0 * (iy * iz + iw * ix);
    const double m22 = 1.0 - 2.0 * (ix * ix + iy * iy);

    // V = R(q) * diag(s); Sigma = V * V^T.
    const double dsx = double(sx), dsy = double(sy), dsz = double(sz);
    const double v00 = m00 * dsx, v01 = m01 * dsy, v02 = m02 * dsz;
    const double v10 = m10 * dsx, v11 = m11 * dsy, v12 = m12 * dsz;
    const double v20 = m20 * dsx, v21 = m21 * dsy, v22 = m22 * dsz;
    const double s00 = (v00 * v00 + v01 * v01) + v02 * v02;
    const double s01 = (v00 * v10 + v01 * v11) + v02 * v12;
    const double s02 = (v00 * v20 + v01 * v21) + v02 * v22;
    const double s11 = (v10 * v10 + v11 * v11) + v12 * v12;
    const double s12 = (v10 * v20 + v11 * v21) + v12 * v22;
    const double s22 = (v20 * v20 + v21 * v21) + v22 * v22;

    // B = W * Sigma, C = B * W^T (C symmetric; only the needed entries).
    const double* r = g.rot;
    const double b00 = (r[0] * s00 + r[1] * s01) + r[2] * s02;
    const double b01 = (r[0] * s01 + r[1] * s11) + r[2] * s12;
    const double b02 = (r[0] * s02 + r[1] * s12) + r[2] * s22;
    const double b10 = (r[3] * s00 + r[4] * s01) + r[5] * s02;
    const double b11 = (r[3] * s01 + r[4] * s11) + r[5] * s12;
    const double b12 = (r[3] * s02 + r[4] * s12) + r[5] * s22;
    const double b20 = (r[6] * s00 + r[7] * s01) + r[8] * s02;
    const double b21 = (r[6] * s01 + r[7] * s11) + r[8] * s12;
    const double b22 = (r[6] * s02 + r[7] * s12) + r[8] * s22;
    const double c00 = (b00 * r[0] + b01 * r[1]) + b02 * r[2];
    const double c01 = (b00 * r[3] + b01 * r[4]) + b02 * r[5];
    const double c02 = (b00 * r[6] + b01 * r[7]) + b02 * r[8];
    const double c11 = (b10 * r[3] + b11 * r[4]) + b12 * r[5];
    const double c12 = (b10 * r[6] + b11 * r[7]) + b12 * r[8];
    const double c22 = (b20 * r[6] + b21 * r[7]) + b22 * r[8];

    // Perspective Jacobian at the camera-space center; the depth clamp keeps
    // behind-camera lanes finite (their qpass is already false via z_ok).
    const double zc = std::max(o.tz, 1e-12);
    const double inv_z = 1.0 / zc;
    const double inv_z2 = inv_z * inv_z;
    const double j00 = g.fx * inv_z;
    const double j02 = (0.0 - g.fx * o.tx) * inv_z2;
    const double j11 = g.fy * inv_z;
    const double j12 = (0.0 - g.fy * o.ty) * inv_z2;

    // T = J * C (2x3), cov2d = T * J^T + 0.3 I.
    const double t00 = j00 * c00 + j02 * c02;
    const double t01 = j00 * c01 + j02 * c12;
    const double t02 = j00 * c02 + j02 * c22;
    const double t11 = j11 * c11 + j12 * c12;
    const double t12 = j11 * c12 + j12 * c22;
    o.a = (t00 * j00 + t02 * j02) + 0.3;
    o.b = t01 * j11 + t02 * j12;
    o.c = (t11 * j11 + t12 * j12) + 0.3;

    const double det = o.a * o.c - o.b * o.b;
    const double mid = 0.5 * (o.a + o.c);
    const double disc = std::sqrt(std::max(mid * mid - det, 0.0));
    o.lambda_max = mid + disc;
    o.lambda_min = mid - disc;
    o.radius = 3.0 * std::sqrt(o.lambda_max);
    o.qpass = o.vis && o.z_ok && o.radius <= tau_r;
    return o;
}

}  // namespace lodgs
