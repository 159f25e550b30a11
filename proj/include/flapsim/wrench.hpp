#pragma once

#include <cmath>

#include "flapsim/vec.hpp"

namespace flapsim {

// Actuation demand on the rigid body: scalar thrust along the body z-axis b3
// plus a body-frame torque vector.
struct Wrench {
    double thrust{0.0};  // N, along b3
    Vec3 torque{};       // N*m, body frame

    static constexpr Wrench zero() { return {}; }

    constexpr Wrench operator+(const Wrench& r) const {
        return {thrust + r.thrust, torque + r.torque};
    }

    bool is_finite() const { return std::isfinite(thrust) && torque.is_finite(); }

    constexpr bool operator==(const Wrench&) const = default;
};

}  // namespace flapsim
