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

#include "antopt/channel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>

namespace antopt {

// Linear (dimensionless) signal-to-noise power ratio.
class SnrLinear {
  public:
    explicit SnrLinear(double value) : value_(value) {
        if (!std::isfinite(value) || !(value > 0.0))
            throw std::domain_error("SnrLinear: value must be positive and finite");
    }

    static SnrLinear from_db(double db) { return SnrLinear(std::pow(10.0, db / 10.0)); }

    double value() const { return value_; }
    double db() const { return 10.0 * std::log10(value_); }

    bool operator==(const SnrLinear &) const = default;

  private:
    double value_;
};

// Spectral efficiency in bits/s/Hz; nonnegative and finite.
struct CapacityValue {
    double bits_per_s_per_hz = 0.0;

    CapacityValue() = default;
    explicit CapacityValue(double c) : bits_per_s_per_hz(c) {
        if (!std::isfinite(c) || c < 0.0)
            throw std::domain_error("CapacityValue: must be nonnegative and finite");
    }

    bool operator==(const CapacityValue &) const = default;
};

/// Rescales the tensor by one real factor so that (1/M) sum_k ||H_k||_F^2
/// equals Nt*Nr (unit mean per-entry power).
inline CsiTensor normalize_csi(const CsiTensor &csi) {
    double p = csi.mean_power();
    if (!(p > 0.0))
        throw std::invalid_argument("normalize_csi: degenerate all-zero tensor");
    double scale = 1.0 / std::sqrt(p);
    CsiTensor out = csi;
    for (auto &e : out.entries)
        e *= scale;
    return out;
}

/// MIMO-OFDM channel capacity, averaged over subcarriers:
///
///   C = (1/M) sum_k log2 det(I + (snr / Nt) H_k H_k^H)
///
/// The log-det is evaluated through a Cholesky factorization of the
/// Hermitian positive-definite argument; pivots are checked rather than
/// trusting a naive determinant.
inline CapacityValue mimo_ofdm_capacity(const CsiTensor &csi, const SnrLinear &snr) {
    if (csi.n_subcarriers < 1)
        throw std::domain_error("mimo_ofdm_capacity: empty tensor");
    if (!csi.all_finite())
        throw std::domain_error("mimo_ofdm_capacity: non-finite CSI entries");

    const int m = csi.n_subcarriers;
    const int nr = csi.n_rx;
    const int nt = csi.n_tx;
    const double gain = snr.value() / static_cast<double>(nt);

    Eigen::MatrixXcd h(nr, nt);
    double log2_sum = 0.0;
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nt; ++j)
                h(i, j) = csi.at(k, i, j);
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(nr, nr);
        a.noalias() += gain * (h * h.adjoint());
        Eigen::LLT<Eigen::MatrixXcd> llt(a);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("mimo_ofdm_capacity: argument matrix not positive definite");
        const auto &l = llt.matrixLLT();
        for (int i = 0; i < nr; ++i) {
            double pivot = l(i, i).real();
            if (!(pivot > 0.0))
                throw std::runtime_error("mimo_ofdm_capacity: nonpositive Cholesky pivot");
            log2_sum += 2.0 * std::log2(pivot);
        }
    }
    return CapacityValue(std::max(0.0, log2_sum / static_cast<double>(m)));
}

/// Converts a measured RSSI to linear SNR against a noise floor:
/// 10^((rssi - floor)/10). Values below the floor map to ratios < 1.
inline SnrLinear snr_from_rssi(double rssi_dbm, double noise_floor_dbm) {
    if (!std::isfinite(rssi_dbm) || !std::isfinite(noise_floor_dbm))
        throw std::domain_error("snr_from_rssi: non-finite input");
    return SnrLinear(std::pow(10.0, (rssi_dbm - noise_floor_dbm) / 10.0));
}

/// bits/s/Hz * Hz -> bits/s.
inline double capacity_to_throughput_bps(const CapacityValue &c, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0))
        throw std::domain_error("capacity_to_throughput_bps: bandwidth must be positive");
    return c.bits_per_s_per_hz * bandwidth_hz;
}

/// Mean of mimo_ofdm_capacity over individually normalized snapshots.
inline CapacityValue average_capacity(std::span<const CsiTensor> snapshots,
                                      const SnrLinear &snr) {
    if (snapshots.empty())
        throw std::domain_error("average_capacity: needs at least one snapshot");
    double sum = 0.0;
    for (const auto &snap : snapshots) {
        if (snap.n_subcarriers != snapshots.front().n_subcarriers ||
            snap.n_rx != snapshots.front().n_rx || snap.n_tx != snapshots.front().n_tx)
            throw std::domain_error("average_capacity: snapshot shape mismatch");
        sum += mimo_ofdm_capacity(normalize_csi(snap), snr).bits_per_s_per_hz;
    }
    return CapacityValue(sum / static_cast<double>(snapshots.size()));
}

} // namespace antopt
