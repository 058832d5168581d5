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

#include "antopt/geometry.hpp"

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace antopt {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Per-subcarrier complex channel matrices H_k, stored row-major as
// (subcarrier, rx, tx).
struct CsiTensor {
    int n_subcarriers = 0; // M
    int n_rx = 0;
    int n_tx = 0;
    std::vector<std::complex<double>> entries;

    static CsiTensor zeros(int m, int n_rx, int n_tx) {
        if (m < 1 || n_rx < 1 || n_tx < 1)
            throw std::domain_error("CsiTensor: dimensions must be positive");
        CsiTensor t;
        t.n_subcarriers = m;
        t.n_rx = n_rx;
        t.n_tx = n_tx;
        t.entries.assign(static_cast<std::size_t>(m) * n_rx * n_tx, {0.0, 0.0});
        return t;
    }

    std::complex<double> &at(int k, int rx, int tx) {
        return entries[(static_cast<std::size_t>(k) * n_rx + rx) * n_tx + tx];
    }
    const std::complex<double> &at(int k, int rx, int tx) const {
        return entries[(static_cast<std::size_t>(k) * n_rx + rx) * n_tx + tx];
    }

    /// Mean per-entry power (1/(M*Nr*Nt)) sum |h|^2.
    double mean_power() const {
        double sum = 0.0;
        for (const auto &e : entries)
            sum += std::norm(e);
        return entries.empty() ? 0.0 : sum / static_cast<double>(entries.size());
    }

    bool all_finite() const {
        for (const auto &e : entries)
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
                return false;
        return true;
    }
};

struct TxAntenna {
    Vec3 position;
    Axis3 axis;
};

// Point scatterer producing one single-bounce path per (tx, rx) pair.
// depolarization in [0, 1] mixes polarized coupling with an
// orientation-independent leak term.
struct Scatterer {
    Vec3 position;
    std::complex<double> reflectivity;
    double depolarization = 0.0;
};

// Static propagation environment. RX dipole axes are not part of the scene;
// they are supplied per evaluation as an OrientationConfig.
struct Scene {
    std::vector<TxAntenna> tx_antennas;
    std::vector<Vec3> rx_positions;
    std::vector<Scatterer> scatterers;
    double carrier_freq_hz = 5.18e9;
    double subcarrier_spacing_hz = 312.5e3;
    int n_subcarriers = 56;
    double los_k_factor = 3.9810717055349722; // linear; 6 dB default

    void validate() const {
        if (tx_antennas.empty() || rx_positions.empty())
            throw std::invalid_argument("Scene: needs at least one TX and one RX antenna");
        if (n_subcarriers < 1)
            throw std::invalid_argument("Scene: n_subcarriers must be >= 1");
        if (!(carrier_freq_hz > 0.0))
            throw std::invalid_argument("Scene: carrier_freq_hz must be positive");
        if (!(subcarrier_spacing_hz >= 0.0))
            throw std::invalid_argument("Scene: subcarrier_spacing_hz must be nonnegative");
        if (!(los_k_factor > 0.0))
            throw std::invalid_argument("Scene: los_k_factor must be positive");
        for (const auto &s : scatterers) {
            if (std::abs(s.reflectivity) > 1.0 + 1e-12)
                throw std::invalid_argument("Scene: |reflectivity| must be <= 1");
            if (s.depolarization < 0.0 || s.depolarization > 1.0)
                throw std::invalid_argument("Scene: depolarization must be in [0, 1]");
        }
        for (const auto &tx : tx_antennas)
            for (const auto &rx : rx_positions)
                if (!((rx - tx.position).norm() > 0.0))
                    throw std::invalid_argument("Scene: co-located TX/RX antennas");
    }

    double subcarrier_freq(int k) const {
        return carrier_freq_hz +
               (static_cast<double>(k) - (n_subcarriers - 1) / 2.0) * subcarrier_spacing_hz;
    }
};

enum class TxScenario { kVertical, kSlanted };

inline const char *scenario_name(TxScenario s) {
    return s == TxScenario::kVertical ? "V" : "S";
}

inline TxScenario parse_scenario(const std::string &s) {
    if (s == "V" || s == "v")
        return TxScenario::kVertical;
    if (s == "S" || s == "s")
        return TxScenario::kSlanted;
    throw std::invalid_argument("scenario: expected V or S, got '" + s + "'");
}

struct SceneParams {
    int n_scatterers = 12;
    double carrier_freq_hz = 5.18e9;
    double subcarrier_spacing_hz = 312.5e3;
    int n_subcarriers = 56;
    double los_k_factor_db = 6.0;
    double link_distance_m = 2.0;    // TX-RX separation along x
    double antenna_spacing_m = 0.03; // element spacing along y, ~half wavelength
    double antenna_height_m = 1.0;

    bool operator==(const SceneParams &) const = default;
};

namespace detail {

// Uniform double in [0, 1) from the full 64-bit state, fully specified
// (no distribution objects, identical on every platform).
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64 &rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Standard circularly-symmetric complex Gaussian via the polar method.
inline std::complex<double> complex_gaussian(std::mt19937_64 &rng) {
    double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53; // (0, 1]
    double u2 = uniform01(rng);
    double r = std::sqrt(-std::log(u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

} // namespace detail

/// Builds the randomized desk-scale scene for one TX configuration.
///
/// TX and RX pairs face each other along x at the configured link distance.
/// V places both TX axes vertical; S tilts both 45 degrees within the y-z
/// plane so they stay mutually parallel and transverse to the link.
/// Scatterer positions, reflectivities and depolarization factors are drawn
/// from the seeded generator; reflectivity magnitudes are then rescaled so
/// the scene's LoS/scattered intrinsic power ratio equals the K-factor
/// exactly. Identical (scenario, seed, params) always yields an identical
/// scene.
inline Scene make_scene(TxScenario scenario, std::uint64_t seed, const SceneParams &params = {}) {
    if (params.n_scatterers < 0)
        throw std::invalid_argument("make_scene: n_scatterers must be >= 0");
    Scene scene;
    scene.carrier_freq_hz = params.carrier_freq_hz;
    scene.subcarrier_spacing_hz = params.subcarrier_spacing_hz;
    scene.n_subcarriers = params.n_subcarriers;
    scene.los_k_factor = params.n_scatterers == 0
                             ? std::numeric_limits<double>::infinity()
                             : std::pow(10.0, params.los_k_factor_db / 10.0);

    const double d = params.link_distance_m;
    const double s = params.antenna_spacing_m / 2.0;
    const double h = params.antenna_height_m;

    Axis3 tx_axis = scenario == TxScenario::kVertical
                        ? Axis3{0.0, 0.0, 1.0}
                        : orientation_to_axis(0.0, kPi / 4.0); // 45 deg in the y-z plane
    scene.tx_antennas = {{{0.0, -s, h}, tx_axis}, {{0.0, s, h}, tx_axis}};
    scene.rx_positions = {{d, -s, h}, {d, s, h}};

    std::mt19937_64 rng(seed);
    scene.scatterers.reserve(params.n_scatterers);
    for (int i = 0; i < params.n_scatterers; ++i) {
        Vec3 pos;
        for (int attempt = 0; attempt < 256; ++attempt) {
            pos = {detail::uniform_in(rng, -1.0, d + 1.0), detail::uniform_in(rng, -2.0, 2.0),
                   detail::uniform_in(rng, 0.2, 2.5)};
            // Keep scatterers off the direct path and away from the
            // antennas so no single bounce dominates the scattered field.
            bool clear = std::abs(pos.y) > 0.4 || pos.z > h + 0.4 || pos.z < h - 0.4;
            for (const auto &tx : scene.tx_antennas)
                clear = clear && (pos - tx.position).norm() > 0.5;
            for (const auto &rx : scene.rx_positions)
                clear = clear && (pos - rx).norm() > 0.5;
            if (clear)
                break;
        }
        double mag = detail::uniform_in(rng, 0.3, 0.9);
        double phase = detail::uniform_in(rng, 0.0, kTwoPi);
        double depol = detail::uniform_in(rng, 0.6, 0.95);
        scene.scatterers.push_back(
            {pos, std::polar(mag, phase), depol});
    }

    if (!scene.scatterers.empty()) {
        // Rescale reflectivities so scattered intrinsic power (couplings
        // stripped, 1/distance amplitude per segment) is exactly 1/K of the
        // LoS intrinsic power.
        double los_power = 0.0;
        double scat_power = 0.0;
        for (const auto &tx : scene.tx_antennas) {
            for (const auto &rx : scene.rx_positions) {
                double dlos = (rx - tx.position).norm();
                los_power += 1.0 / (dlos * dlos);
                for (const auto &sc : scene.scatterers) {
                    double d1 = (sc.position - tx.position).norm();
                    double d2 = (rx - sc.position).norm();
                    double a = std::abs(sc.reflectivity) / (d1 * d2);
                    scat_power += a * a;
                }
            }
        }
        double target = los_power / scene.los_k_factor;
        double t = std::sqrt(target / scat_power);
        for (auto &sc : scene.scatterers) {
            sc.reflectivity *= t;
            if (std::abs(sc.reflectivity) > 1.0)
                throw std::invalid_argument(
                    "make_scene: requested K-factor needs |reflectivity| > 1");
        }
    }

    scene.validate();
    return scene;
}

// Precomputed per-scene ray geometry: everything about each propagation
// path except the RX polarization couplings, which depend on the
// orientation under evaluation. Building the table once makes repeated
// synthesize calls (optimizer loops, grid oracles) cheap.
class PathTable {
  public:
    explicit PathTable(const Scene &scene) : scene_(scene) {
        scene.validate();
        const int m = scene.n_subcarriers;
        const std::size_t n_rx = scene.rx_positions.size();
        const std::size_t n_tx = scene.tx_antennas.size();

        // LoS amplitude anchor: mean intrinsic LoS power = K/(K+1) so the
        // total intrinsic path power of a make_scene scene is 1.
        double mean_los_geo = 0.0;
        for (const auto &tx : scene.tx_antennas)
            for (const auto &rx : scene.rx_positions) {
                double dlos = (rx - tx.position).norm();
                mean_los_geo += 1.0 / (dlos * dlos);
            }
        mean_los_geo /= static_cast<double>(n_rx * n_tx);
        double k = scene.los_k_factor;
        double los_fraction = std::isfinite(k) ? k / (k + 1.0) : 1.0;
        double c_los = std::sqrt(los_fraction / mean_los_geo);

        rays_.reserve((1 + scene.scatterers.size()) * n_rx * n_tx);
        for (std::size_t i = 0; i < n_rx; ++i) {
            for (std::size_t j = 0; j < n_tx; ++j) {
                const Vec3 &rx_pos = scene.rx_positions[i];
                const TxAntenna &tx = scene.tx_antennas[j];

                Ray los;
                los.rx = static_cast<int>(i);
                los.tx = static_cast<int>(j);
                los.tx_axis = tx.axis;
                los.k_depart = Axis3::from_vector(rx_pos - tx.position);
                los.k_arrive = los.k_depart;
                los.depolarization = 0.0;
                double dlos = (rx_pos - tx.position).norm();
                fill_base(los, std::complex<double>(c_los / dlos, 0.0), dlos / kSpeedOfLight, m);
                rays_.push_back(std::move(los));

                for (const auto &sc : scene.scatterers) {
                    Ray ray;
                    ray.rx = static_cast<int>(i);
                    ray.tx = static_cast<int>(j);
                    ray.tx_axis = tx.axis;
                    ray.k_depart = Axis3::from_vector(sc.position - tx.position);
                    ray.k_arrive = Axis3::from_vector(rx_pos - sc.position);
                    ray.depolarization = sc.depolarization;
                    double d1 = (sc.position - tx.position).norm();
                    double d2 = (rx_pos - sc.position).norm();
                    fill_base(ray, sc.reflectivity * (c_los / (d1 * d2)),
                              (d1 + d2) / kSpeedOfLight, m);
                    rays_.push_back(std::move(ray));
                }
            }
        }
    }

    const Scene &scene() const { return scene_; }
    int n_rx() const { return static_cast<int>(scene_.rx_positions.size()); }
    int n_tx() const { return static_cast<int>(scene_.tx_antennas.size()); }

    /// H_k[i][j] = sum over paths of amplitude * coupling * exp(-j 2 pi f_k tau).
    CsiTensor synthesize(const OrientationConfig &rx_orientations) const {
        if (rx_orientations.n_antennas() != scene_.rx_positions.size())
            throw std::domain_error("synthesize_csi: RX orientation count mismatch");
        std::vector<Axis3> rx_axes;
        rx_axes.reserve(rx_orientations.n_antennas());
        for (const auto &a : rx_orientations.antennas())
            rx_axes.push_back(orientation_to_axis(a.yaw_rad, a.roll_rad));

        CsiTensor out = CsiTensor::zeros(scene_.n_subcarriers, n_rx(), n_tx());
        const int m = scene_.n_subcarriers;
        for (const auto &ray : rays_) {
            double coupling = ray_coupling(ray, rx_axes[ray.rx]);
            if (coupling == 0.0)
                continue;
            std::complex<double> *dst = &out.at(0, ray.rx, ray.tx);
            const std::size_t stride = static_cast<std::size_t>(out.n_rx) * out.n_tx;
            for (int k = 0; k < m; ++k)
                dst[k * stride] += coupling * ray.base[k];
        }
        return out;
    }

  private:
    struct Ray {
        int rx = 0;
        int tx = 0;
        Axis3 tx_axis;
        Axis3 k_depart; // propagation direction leaving the TX
        Axis3 k_arrive; // propagation direction arriving at the RX
        double depolarization = 0.0;
        std::vector<std::complex<double>> base; // amplitude * exp(-j 2 pi f_k tau)
    };

    void fill_base(Ray &ray, std::complex<double> amplitude, double delay_s, int m) {
        ray.base.resize(m);
        for (int k = 0; k < m; ++k) {
            double phase = -kTwoPi * scene_.subcarrier_freq(k) * delay_s;
            ray.base[k] = amplitude * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }

    // Inner product of the transverse dipole components at departure and
    // arrival, mixed with the scatterer's orientation-independent leak.
    // For LoS rays (shared direction, zero depolarization) this is exactly
    // polarization_coupling(tx_axis, rx_axis, k_hat).
    static double ray_coupling(const Ray &ray, const Axis3 &rx_axis) {
        double kt = ray.tx_axis.dot(ray.k_depart);
        double kr = rx_axis.dot(ray.k_arrive);
        Vec3 e_t = ray.tx_axis.vec() - ray.k_depart.vec() * kt;
        Vec3 e_r = rx_axis.vec() - ray.k_arrive.vec() * kr;
        double polarized = e_t.dot(e_r);
        return (1.0 - ray.depolarization) * polarized + ray.depolarization;
    }

    Scene scene_;
    std::vector<Ray> rays_;
};

/// One-shot synthesis; builds the path table internally. Prefer holding a
/// PathTable when evaluating many orientations against the same scene.
inline CsiTensor synthesize_csi(const Scene &scene, const OrientationConfig &rx_orientations) {
    return PathTable(scene).synthesize(rx_orientations);
}

/// Adds i.i.d. circularly-symmetric complex Gaussian measurement noise with
/// per-entry variance mean(|csi|^2) / measurement_snr. Deterministic given
/// the rng stream state.
inline CsiTensor noisy_snapshot(const CsiTensor &csi, double measurement_snr,
                                std::mt19937_64 &rng) {
    if (!(measurement_snr > 0.0))
        throw std::domain_error("noisy_snapshot: measurement_snr must be positive");
    double sigma = std::sqrt(csi.mean_power() / measurement_snr);
    CsiTensor out = csi;
    for (auto &e : out.entries)
        e += sigma * detail::complex_gaussian(rng);
    return out;
}

} // namespace antopt
