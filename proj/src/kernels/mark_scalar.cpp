// SPDX-License-Identifier: Apache-2.0
#include "lodgs/kernels.hpp"
#include "lodgs/mark_core.hpp"

namespace lodgs::detail {

void mark_scalar(const CameraGeom& geom, const NodeArrays& n, std::size_t begin,
                 std::size_t end, double tau_r, std::uint8_t* vis,
                 std::uint8_t* qpass, double* radius_out) {
    for (std::size_t i = begin; i < end; ++i) {
        const MarkOut o =
            mark_core(geom, n.mean_x[i], n.mean_y[i], n.mean_z[i], n.scale_x[i],
                      n.scale_y[i], n.scale_z[i], n.quat_w[i], n.quat_x[i],
                      n.quat_y[i], n.quat_z[i], tau_r);
        vis[i] = o.vis ? 1 : 0;
        qpass[i] = o.qpass ? 1 : 0;
        if (radius_out) radius_out[i] = o.radius;
    }
}

}  // namespace lodgs::detail
