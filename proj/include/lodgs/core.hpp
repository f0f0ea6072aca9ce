// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace lodgs {

using NodeIndex = std::uint32_t;

// Parent index of a level-0 node.
inline constexpr NodeIndex kRootParent = std::numeric_limits<NodeIndex>::max();

struct Vec3f {
    float x = 0.f, y = 0.f, z = 0.f;
    friend bool operator==(const Vec3f&, const Vec3f&) = default;
};

// Unit quaternion, (w, x, y, z) order.
struct Quatf {
    float w = 1.f, x = 0.f, y = 0.f, z = 0.f;
    friend bool operator==(const Quatf&, const Quatf&) = default;
};

struct Vec3d {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3d() = default;
    Vec3d(double px, double py, double pz) : x(px), y(py), z(pz) {}
    explicit Vec3d(const Vec3f& v) : x(v.x), y(v.y), z(v.z) {}

    Vec3d operator+(const Vec3d& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3d operator-(const Vec3d& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3d operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(const Vec3d& a, const Vec3d& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3d& a) { return std::sqrt(dot(a, a)); }

// Row-major 3x3.
struct Mat3d {
    double m[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    Vec3d mul(const Vec3d& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3d mul(const Mat3d& o) const {
        Mat3d r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[3 * i + j] = m[3 * i] * o.m[j] + m[3 * i + 1] * o.m[3 + j] + m[3 * i + 2] * o.m[6 + j];
        return r;
    }

    Mat3d transposed() const {
        return Mat3d{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }

    Vec3d operator*(const Vec3d& v) const { return mul(v); }
    Mat3d operator*(const Mat3d& o) const { return mul(o); }
};

// Rotation matrix of a (not necessarily exactly unit) quaternion; normalizes first.
inline Mat3d rotation_matrix(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n; x /= n; y /= n; z /= n;
    Mat3d r;
    r.m[0] = 1 - 2 * (y * y + z * z);
    r.m[1] = 2 * (x * y - w * z);
    r.m[2] = 2 * (x * z + w * y);
    r.m[3] = 2 * (x * y + w * z);
    r.m[4] = 1 - 2 * (x * x + z * z);
    r.m[5] = 2 * (y * z - w * x);
    r.m[6] = 2 * (x * z - w * y);
    r.m[7] = 2 * (y * z + w * x);
    r.m[8] = 1 - 2 * (x * x + y * y);
    return r;
}

inline Mat3d rotation_matrix(const Quatf& q) {
    return rotation_matrix(q.w, q.x, q.y, q.z);
}

// Scene/config content that fails its contract.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure (open, read, write).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file content (bad magic, truncation, schema mismatch).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lodgs
