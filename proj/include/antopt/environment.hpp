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

#include "antopt/capacity.hpp"
#include "antopt/channel.hpp"
#include "antopt/geometry.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace antopt {

struct CapacitySample {
    OrientationConfig orientation;
    CapacityValue capacity;
    int snapshots_used = 1;
    SnrLinear snr = SnrLinear(1.0);
    std::string trial_tag;
};

// The boundary optimizers talk to: set an orientation, measure, get the
// averaged capacity back. Implementations must be total over domain() and
// may differ across repeated calls only through declared measurement noise.
class Environment {
  public:
    virtual ~Environment() = default;

    virtual CapacitySample evaluate(const OrientationConfig &orientation) = 0;

    /// Noise-suppressed evaluation, used by the grid oracle. Backends
    /// without measurement noise keep the default.
    virtual CapacitySample evaluate_noiseless(const OrientationConfig &orientation) {
        return evaluate(orientation);
    }

    virtual SearchDomain domain() const = 0;
    virtual std::string metadata() const = 0;
};

/// Effective SNR of a raw (unnormalized) CSI measurement: the configured
/// reference SNR scaled by the raw mean channel gain. This mirrors the
/// live pipeline where the CSI is normalized and the SNR comes from the
/// measured RSSI, so orientations with higher channel gain see higher SNR.
inline SnrLinear effective_snr(const CsiTensor &raw, const SnrLinear &reference) {
    double p = raw.mean_power();
    return SnrLinear(std::max(reference.value() * p, 1e-300));
}

/// Capacity of one raw CSI measurement against a reference SNR
/// (normalize, then score at the gain-scaled SNR). All-zero tensors carry
/// no signal and score zero.
inline CapacityValue capacity_from_raw_csi(const CsiTensor &raw, const SnrLinear &reference) {
    if (!(raw.mean_power() > 0.0))
        return CapacityValue(0.0);
    return mimo_ofdm_capacity(normalize_csi(raw), effective_snr(raw, reference));
}

// Live simulator backend: synthesizes CSI for the requested orientation,
// adds per-snapshot measurement noise, and scores the averaged capacity.
// The snapshot rng advances across calls, so repeated evaluations are noisy
// but the whole evaluation sequence is reproducible from the seed.
class SimulatedEnvironment final : public Environment {
  public:
    SimulatedEnvironment(Scene scene, SnrLinear reference_snr, double measurement_snr,
                         int n_snapshots, std::uint64_t seed)
        : scene_(std::move(scene)), table_(scene_), ref_snr_(reference_snr),
          measurement_snr_(measurement_snr), n_snapshots_(n_snapshots), seed_(seed), rng_(seed) {
        if (n_snapshots_ < 1)
            throw std::invalid_argument("SimulatedEnvironment: n_snapshots must be >= 1");
        if (!(measurement_snr_ > 0.0))
            throw std::invalid_argument("SimulatedEnvironment: measurement_snr must be positive");
    }

    CapacitySample evaluate(const OrientationConfig &orientation) override {
        CsiTensor raw = table_.synthesize(orientation);
        double p = raw.mean_power();
        SnrLinear snr = effective_snr(raw, ref_snr_);
        if (!(p > 0.0))
            return {orientation, CapacityValue(0.0), n_snapshots_, snr, ""};
        std::vector<CsiTensor> snaps;
        snaps.reserve(n_snapshots_);
        for (int i = 0; i < n_snapshots_; ++i)
            snaps.push_back(noisy_snapshot(raw, measurement_snr_, rng_));
        return {orientation, average_capacity(snaps, snr), n_snapshots_, snr, ""};
    }

    CapacitySample evaluate_noiseless(const OrientationConfig &orientation) override {
        CsiTensor raw = table_.synthesize(orientation);
        SnrLinear snr = effective_snr(raw, ref_snr_);
        return {orientation, capacity_from_raw_csi(raw, ref_snr_), 1, snr, ""};
    }

    SearchDomain domain() const override {
        return SearchDomain::full(scene_.rx_positions.size());
    }

    std::string metadata() const override {
        return "simulated scene: " + std::to_string(scene_.tx_antennas.size()) + "x" +
               std::to_string(scene_.rx_positions.size()) + " antennas, " +
               std::to_string(scene_.scatterers.size()) + " scatterers, M=" +
               std::to_string(scene_.n_subcarriers) + ", seed=" + std::to_string(seed_);
    }

    const Scene &scene() const { return scene_; }
    SnrLinear reference_snr() const { return ref_snr_; }

  private:
    Scene scene_;
    PathTable table_;
    SnrLinear ref_snr_;
    double measurement_snr_;
    int n_snapshots_;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
};

inline std::unique_ptr<SimulatedEnvironment> simulated_env(Scene scene, SnrLinear snr,
                                                           double measurement_snr,
                                                           int n_snapshots, std::uint64_t seed) {
    return std::make_unique<SimulatedEnvironment>(std::move(scene), snr, measurement_snr,
                                                  n_snapshots, seed);
}

struct GridOracleResult {
    OrientationConfig best;
    CapacityValue value;
    std::vector<CapacitySample> landscape; // grid iteration order, last dim fastest
};

/// Exhaustive noise-suppressed evaluation of the Cartesian orientation grid
/// with the given step. Yaw dimensions cover [lo, hi) (periodic, endpoint
/// excluded); roll dimensions include both endpoints. Ties keep the first
/// grid point. Grids larger than eval_cap points are rejected.
inline GridOracleResult grid_oracle(Environment &env, double step_deg,
                                    std::uint64_t eval_cap = 1000000) {
    if (!(step_deg > 0.0))
        throw std::invalid_argument("grid_oracle: step must be positive");
    const SearchDomain dom = env.domain();
    const double step = deg2rad(step_deg);

    std::vector<std::vector<double>> values(dom.size());
    std::uint64_t total = 1;
    for (std::size_t d = 0; d < dom.size(); ++d) {
        const auto &dim = dom.dims[d];
        for (std::uint64_t i = 0;; ++i) {
            double v = dim.lo + static_cast<double>(i) * step;
            if (dim.periodic ? (v >= dim.hi - 1e-9) : (v > dim.hi + 1e-9))
                break;
            values[d].push_back(v);
        }
        if (values[d].size() < 2)
            throw std::invalid_argument("grid_oracle: step must split every dimension into >= 2 points");
        total *= values[d].size();
        if (total > eval_cap)
            throw std::runtime_error("grid_oracle: grid size exceeds evaluation cap");
    }

    GridOracleResult result;
    result.landscape.reserve(total);
    std::vector<std::size_t> idx(dom.size(), 0);
    bool first = true;
    while (true) {
        std::vector<AnglePair> antennas(dom.size() / 2);
        for (std::size_t d = 0; d < dom.size(); ++d) {
            double v = values[d][idx[d]];
            if (d % 2 == 0)
                antennas[d / 2].yaw_rad = v;
            else
                antennas[d / 2].roll_rad = v;
        }
        CapacitySample sample =
            env.evaluate_noiseless(OrientationConfig::from_radians(std::move(antennas)));
        if (first || sample.capacity.bits_per_s_per_hz > result.value.bits_per_s_per_hz) {
            result.best = sample.orientation;
            result.value = sample.capacity;
            first = false;
        }
        result.landscape.push_back(std::move(sample));

        std::size_t d = dom.size();
        while (d > 0) {
            --d;
            if (++idx[d] < values[d].size())
                break;
            idx[d] = 0;
            if (d == 0)
                return result;
        }
    }
}

/// Max - min capacity over an oracle landscape.
inline double landscape_spread_bps_hz(const GridOracleResult &r) {
    double lo = r.landscape.front().capacity.bits_per_s_per_hz;
    double hi = lo;
    for (const auto &s : r.landscape) {
        lo = std::min(lo, s.capacity.bits_per_s_per_hz);
        hi = std::max(hi, s.capacity.bits_per_s_per_hz);
    }
    return hi - lo;
}

} // namespace antopt
