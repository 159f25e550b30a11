#pragma once

#include <array>
#include <cmath>

namespace flapsim {

// 3-vector over doubles. Units are contextual (m, m/s, rad/s, N, N*m).
struct Vec3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    static constexpr Vec3 zero() { return {}; }
    static constexpr Vec3 unit_x() { return {1.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_y() { return {0.0, 1.0, 0.0}; }
    static constexpr Vec3 unit_z() { return {0.0, 0.0, 1.0}; }

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator+(const Vec3& r) const { return {x + r.x, y + r.y, z + r.z}; }
    constexpr Vec3 operator-(const Vec3& r) const { return {x - r.x, y - r.y, z - r.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

    constexpr Vec3& operator+=(const Vec3& r) {
        x += r.x;
        y += r.y;
        z += r.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& r) {
        x -= r.x;
        y -= r.y;
        z -= r.z;
        return *this;
    }

    constexpr double dot(const Vec3& r) const { return x * r.x + y * r.y + z * r.z; }

    constexpr Vec3 cross(const Vec3& r) const {
        return {y * r.z - z * r.y, z * r.x - x * r.z, x * r.y - y * r.x};
    }

    // Componentwise product; applies a diagonal gain matrix stored as a vector.
    constexpr Vec3 cwise(const Vec3& r) const { return {x * r.x, y * r.y, z * r.z}; }

    constexpr double norm_squared() const { return dot(*this); }
    double norm() const { return std::sqrt(norm_squared()); }

    // Componentwise clamp to [-bound, bound]; bound components must be >= 0.
    constexpr Vec3 clamped(const Vec3& bound) const {
        auto clip = [](double v, double b) { return v > b ? b : (v < -b ? -b : v); };
        return {clip(x, bound.x), clip(y, bound.y), clip(z, bound.z)};
    }

    bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

// 3x3 matrix, row-major. Used for the inertia tensor and rotation matrices.
struct Mat3 {
    std::array<double, 9> m{0, 0, 0, 0, 0, 0, 0, 0, 0};

    constexpr double operator()(int r, int c) const { return m[3 * r + c]; }
    constexpr double& operator()(int r, int c) { return m[3 * r + c]; }

    static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

    static constexpr Mat3 diagonal(const Vec3& d) {
        return Mat3{{d.x, 0, 0, 0, d.y, 0, 0, 0, d.z}};
    }

    static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        return Mat3{{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
    }

    constexpr Vec3 col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }
    constexpr Vec3 row(int r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }

    constexpr Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    constexpr Mat3 operator*(const Mat3& r) const {
        Mat3 out;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) {
                    s += (*this)(i, k) * r(k, j);
                }
                out(i, j) = s;
            }
        }
        return out;
    }

    constexpr Mat3 transpose() const {
        return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
    }

    constexpr double trace() const { return m[0] + m[4] + m[8]; }

    constexpr double determinant() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    // Inverse by adjugate; caller guarantees non-singularity.
    constexpr Mat3 inverse() const {
        const double inv_det = 1.0 / determinant();
        Mat3 out;
        out(0, 0) = (m[4] * m[8] - m[5] * m[7]) * inv_det;
        out(0, 1) = (m[2] * m[7] - m[1] * m[8]) * inv_det;
        out(0, 2) = (m[1] * m[5] - m[2] * m[4]) * inv_det;
        out(1, 0) = (m[5] * m[6] - m[3] * m[8]) * inv_det;
        out(1, 1) = (m[0] * m[8] - m[2] * m[6]) * inv_det;
        out(1, 2) = (m[2] * m[3] - m[0] * m[5]) * inv_det;
        out(2, 0) = (m[3] * m[7] - m[4] * m[6]) * inv_det;
        out(2, 1) = (m[1] * m[6] - m[0] * m[7]) * inv_det;
        out(2, 2) = (m[0] * m[4] - m[1] * m[3]) * inv_det;
        return out;
    }

    bool is_finite() const {
        for (double v : m) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }
};

}  // namespace flapsim
