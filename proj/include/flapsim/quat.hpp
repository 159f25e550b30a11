#pragma once

#include <cmath>
#include <optional>

#include "flapsim/vec.hpp"

namespace flapsim {

// Quaternion, Hamilton convention (i*j = k), scalar-first storage.
//
// A unit quaternion represents the vehicle attitude: rotate() maps body-frame
// coordinates into the inertial frame, so the body z-axis expressed in the
// inertial frame is q.rotate({0,0,1}). The same struct also carries non-unit
// values such as [0, omega] in the kinematic equation and filter intermediates;
// operations that require unit norm say so.
struct Quat {
    double w{1.0};
    Vec3 v{};

    constexpr Quat() = default;
    constexpr Quat(double w_, const Vec3& v_) : w(w_), v(v_) {}
    constexpr Quat(double w_, double x, double y, double z) : w(w_), v(x, y, z) {}

    static constexpr Quat identity() { return {}; }

    // [0, u]: embeds a vector as a pure quaternion (p-bar in the kinematics).
    static constexpr Quat pure(const Vec3& u) { return {0.0, u}; }

    static Quat from_axis_angle(const Vec3& axis, double angle) {
        const double n = axis.norm();
        if (n == 0.0) return identity();
        const double h = 0.5 * angle;
        return {std::cos(h), axis * (std::sin(h) / n)};
    }

    // Hamilton product.
    constexpr Quat operator*(const Quat& r) const {
        return {w * r.w - v.dot(r.v), r.v * w + v * r.w + v.cross(r.v)};
    }

    constexpr Quat operator+(const Quat& r) const { return {w + r.w, v + r.v}; }
    constexpr Quat operator*(double s) const { return {w * s, v * s}; }
    constexpr Quat operator-() const { return {-w, -v}; }

    // Scalar part unchanged, vector part negated; equals the inverse for unit q.
    constexpr Quat conjugate() const { return {w, -v}; }

    constexpr double dot(const Quat& r) const { return w * r.w + v.dot(r.v); }
    constexpr double norm_squared() const { return w * w + v.norm_squared(); }
    double norm() const { return std::sqrt(norm_squared()); }

    // Fails on a (numerically) zero quaternion, which signals corrupted state.
    std::optional<Quat> normalized() const {
        const double n = norm();
        if (n <= 1e-12) return std::nullopt;
        return Quat{w / n, v / n};
    }

    // Rotates a body-frame vector into the inertial frame. Requires unit norm.
    // Equivalent to the vector part of q * [0,u] * q^-1.
    constexpr Vec3 rotate(const Vec3& u) const {
        const Vec3 t = v.cross(u) * 2.0;
        return u + t * w + v.cross(t);
    }

    // Body-to-inertial rotation matrix; columns are the body axes b1, b2, b3
    // expressed in the inertial frame. Requires unit norm.
    constexpr Mat3 rotation_matrix() const {
        const double ww = w * w, xx = v.x * v.x, yy = v.y * v.y, zz = v.z * v.z;
        const double wx = w * v.x, wy = w * v.y, wz = w * v.z;
        const double xy = v.x * v.y, xz = v.x * v.z, yz = v.y * v.z;
        Mat3 r;
        r(0, 0) = ww + xx - yy - zz;
        r(0, 1) = 2.0 * (xy - wz);
        r(0, 2) = 2.0 * (xz + wy);
        r(1, 0) = 2.0 * (xy + wz);
        r(1, 1) = ww - xx + yy - zz;
        r(1, 2) = 2.0 * (yz - wx);
        r(2, 0) = 2.0 * (xz - wy);
        r(2, 1) = 2.0 * (yz + wx);
        r(2, 2) = ww - xx - yy + zz;
        return r;
    }

    bool is_finite() const { return std::isfinite(w) && v.is_finite(); }

    constexpr bool operator==(const Quat&) const = default;
};

constexpr Quat operator*(double s, const Quat& q) { return q * s; }

// Extracts the unit quaternion of a rotation matrix using Shepperd's method
// (the branch with the largest diagonal-derived pivot, stable near w = 0).
// The sign is canonicalized to w >= 0. Rejects matrices that are not special
// orthogonal within `tol` (checked on S^T S - I and det S - 1).
inline std::optional<Quat> quat_from_rotation_matrix(const Mat3& s, double tol = 1e-6) {
    const Mat3 sts = s.transpose() * s;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(sts(i, j) - expected) > tol) return std::nullopt;
        }
    }
    if (std::abs(s.determinant() - 1.0) > tol) return std::nullopt;

    const double t = s.trace();
    Quat q;
    if (t >= s(0, 0) && t >= s(1, 1) && t >= s(2, 2)) {
        const double r = std::sqrt(1.0 + t);
        q.w = 0.5 * r;
        const double k = 0.5 / r;
        q.v = {(s(2, 1) - s(1, 2)) * k, (s(0, 2) - s(2, 0)) * k, (s(1, 0) - s(0, 1)) * k};
    } else if (s(0, 0) >= s(1, 1) && s(0, 0) >= s(2, 2)) {
        const double r = std::sqrt(1.0 + s(0, 0) - s(1, 1) - s(2, 2));
        const double k = 0.5 / r;
        q.w = (s(2, 1) - s(1, 2)) * k;
        q.v = {0.5 * r, (s(0, 1) + s(1, 0)) * k, (s(0, 2) + s(2, 0)) * k};
    } else if (s(1, 1) >= s(2, 2)) {
        const double r = std::sqrt(1.0 - s(0, 0) + s(1, 1) - s(2, 2));
        const double k = 0.5 / r;
        q.w = (s(0, 2) - s(2, 0)) * k;
        q.v = {(s(0, 1) + s(1, 0)) * k, 0.5 * r, (s(1, 2) + s(2, 1)) * k};
    } else {
        const double r = std::sqrt(1.0 - s(0, 0) - s(1, 1) + s(2, 2));
        const double k = 0.5 / r;
        q.w = (s(1, 0) - s(0, 1)) * k;
        q.v = {(s(0, 2) + s(2, 0)) * k, (s(1, 2) + s(2, 1)) * k, 0.5 * r};
    }
    if (q.w < 0.0) q = -q;
    const auto qn = q.normalized();
    if (!qn) return std::nullopt;
    return *qn;
}

}  // namespace flapsim
