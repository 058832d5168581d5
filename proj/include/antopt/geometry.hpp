// SPDX-License-Identifier: Apache-2.0
//
// antopt - automatic Wi-Fi antenna orientation tuning toolkit
// Copyright (C) 2026 antopt contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace antopt {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Angles are radians everywhere inside the library; degrees appear only at
// CLI and file boundaries.
inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps a yaw angle into [0, 2*pi).
inline double wrap_yaw(double yaw) {
    double y = std::fmod(yaw, kTwoPi);
    if (y < 0.0)
        y += kTwoPi;
    return (y >= kTwoPi) ? 0.0 : y;
}

/// Clamps a roll angle into [0, pi].
inline double clamp_roll(double roll) { return std::clamp(roll, 0.0, kPi); }

/// Signed angular difference wrapped into (-pi, pi].
inline double wrap_angle_diff(double d) {
    double r = std::remainder(d, kTwoPi);
    return (r <= -kPi) ? kPi : r;
}

// Plain 3-vector used for positions and directions (meters or dimensionless).
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

// Unoriented dipole axis: u and -u describe the same physical antenna rod.
// Components must form a unit vector; factory functions below guarantee it.
struct Axis3 {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double dot(const Axis3 &o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 vec() const { return {x, y, z}; }

    // Validates the unit-norm invariant against the given tolerance.
    static Axis3 checked(double x, double y, double z, double tol = 1e-6) {
        Axis3 a{x, y, z};
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw std::domain_error("Axis3: non-finite component");
        if (std::abs(a.norm() - 1.0) > tol)
            throw std::domain_error("Axis3: not a unit vector");
        return a;
    }

    static Axis3 from_vector(const Vec3 &v) {
        double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::domain_error("Axis3: cannot normalize zero or non-finite vector");
        return Axis3{v.x / n, v.y / n, v.z / n};
    }
};

struct AnglePair {
    double yaw_rad = 0.0;
    double roll_rad = 0.0;

    bool operator==(const AnglePair &) const = default;
};

// Per-antenna (yaw, roll) servo setting. Yaw is stored wrapped into
// [0, 2*pi), roll clamped into [0, pi]; both normalizations happen at
// construction so stored configs always satisfy the invariants.
class OrientationConfig {
  public:
    OrientationConfig() = default;

    static OrientationConfig from_radians(std::vector<AnglePair> antennas) {
        for (auto &a : antennas) {
            if (!std::isfinite(a.yaw_rad) || !std::isfinite(a.roll_rad))
                throw std::domain_error("OrientationConfig: non-finite angle");
            a.yaw_rad = wrap_yaw(a.yaw_rad);
            a.roll_rad = clamp_roll(a.roll_rad);
        }
        OrientationConfig c;
        c.antennas_ = std::move(antennas);
        return c;
    }

    static OrientationConfig from_degrees(std::vector<AnglePair> antennas_deg) {
        for (auto &a : antennas_deg) {
            a.yaw_rad = deg2rad(a.yaw_rad);
            a.roll_rad = deg2rad(a.roll_rad);
        }
        return from_radians(std::move(antennas_deg));
    }

    std::size_t n_antennas() const { return antennas_.size(); }
    std::size_t dimension() const { return 2 * antennas_.size(); }
    const AnglePair &antenna(std::size_t i) const { return antennas_.at(i); }
    const std::vector<AnglePair> &antennas() const { return antennas_; }

    // Flattened coordinate view (yaw0, roll0, yaw1, roll1, ...). Even
    // dimensions are periodic yaw angles, odd dimensions are rolls.
    double coord(std::size_t d) const {
        const AnglePair &a = antennas_.at(d / 2);
        return (d % 2 == 0) ? a.yaw_rad : a.roll_rad;
    }

    std::vector<double> coords() const {
        std::vector<double> v;
        v.reserve(dimension());
        for (const auto &a : antennas_) {
            v.push_back(a.yaw_rad);
            v.push_back(a.roll_rad);
        }
        return v;
    }

    bool operator==(const OrientationConfig &) const = default;

  private:
    std::vector<AnglePair> antennas_;
};

inline bool is_yaw_dimension(std::size_t d) { return d % 2 == 0; }

/// Maps a (yaw, roll) servo setting to the dipole axis direction.
///
/// roll = 0 is the vertical rest pose (z-up); roll tilts the rod within the
/// local y-z plane and yaw then rotates the tilt plane about the world z
/// axis:  u = (-sin(roll) sin(yaw), sin(roll) cos(yaw), cos(roll)).
inline Axis3 orientation_to_axis(double yaw_rad, double roll_rad) {
    if (!std::isfinite(yaw_rad) || !std::isfinite(roll_rad))
        throw std::domain_error("orientation_to_axis: non-finite input");
    double sr = std::sin(roll_rad);
    double cr = std::cos(roll_rad);
    Axis3 u{-sr * std::sin(yaw_rad), sr * std::cos(yaw_rad), cr};
    // Renormalize so downstream unit-norm checks hold to 1e-9.
    double n = u.norm();
    return Axis3{u.x / n, u.y / n, u.z / n};
}

/// Short-dipole polarization coupling between a TX and an RX dipole for a
/// ray travelling along k_hat.
///
/// Each axis is projected onto the plane transverse to propagation,
/// e = (I - k k^T) u, and the coupling is the inner product e_tx . e_rx.
/// Magnitude lies in [0, 1]; the sign (carrier phase 0 or pi) is kept.
inline double polarization_coupling(const Axis3 &tx_axis, const Axis3 &rx_axis,
                                    const Axis3 &k_hat) {
    constexpr double tol = 1e-6;
    if (std::abs(tx_axis.norm() - 1.0) > tol || std::abs(rx_axis.norm() - 1.0) > tol ||
        std::abs(k_hat.norm() - 1.0) > tol)
        throw std::domain_error("polarization_coupling: inputs must be unit vectors");
    double kt = tx_axis.dot(k_hat);
    double kr = rx_axis.dot(k_hat);
    // e_tx . e_rx = u_tx . u_rx - (u_tx . k)(u_rx . k)
    return tx_axis.dot(rx_axis) - kt * kr;
}

/// Scaled angular distance between two configs, used by the GP kernel.
/// Yaw differences wrap into (-pi, pi]; roll differences are plain.
inline double config_distance(const OrientationConfig &a, const OrientationConfig &b,
                              std::span<const double> length_scales_rad) {
    if (a.n_antennas() != b.n_antennas())
        throw std::domain_error("config_distance: antenna count mismatch");
    if (length_scales_rad.size() != a.dimension())
        throw std::domain_error("config_distance: length scale count mismatch");
    double sum = 0.0;
    for (std::size_t d = 0; d < a.dimension(); ++d) {
        double ell = length_scales_rad[d];
        if (!(ell > 0.0))
            throw std::domain_error("config_distance: length scales must be positive");
        double diff = a.coord(d) - b.coord(d);
        if (is_yaw_dimension(d))
            diff = wrap_angle_diff(diff);
        diff /= ell;
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

/// Unoriented angle between two dipole axes in [0, pi/2] (u and -u are the
/// same rod, so the axes are compared up to sign).
inline double great_circle_angle(const Axis3 &a, const Axis3 &b) {
    double c = std::clamp(std::abs(a.dot(b)), 0.0, 1.0);
    return std::acos(c);
}

// Box bounds of the optimization domain. Even dimensions (yaws) are
// periodic; the optimizer treats them with wrap-around metric semantics.
struct SearchDomain {
    struct Dim {
        double lo = 0.0;
        double hi = 0.0;
        bool periodic = false;
    };

    std::vector<Dim> dims;

    std::size_t size() const { return dims.size(); }

    // Full servo travel for n antennas: yaw in [0, 2*pi), roll in [0, pi].
    static SearchDomain full(std::size_t n_antennas) {
        SearchDomain d;
        d.dims.reserve(2 * n_antennas);
        for (std::size_t i = 0; i < n_antennas; ++i) {
            d.dims.push_back({0.0, kTwoPi, true});
            d.dims.push_back({0.0, kPi, false});
        }
        return d;
    }
};

} // namespace antopt
