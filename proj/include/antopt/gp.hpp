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

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace antopt {

struct GPHyperparams {
    std::vector<double> length_scales; // radians per input dimension
    double signal_variance = 1.0;      // on standardized targets
    double noise_variance = 0.01;
    double jitter = 1e-8;

    void validate(std::size_t dimension) const {
        if (length_scales.size() != dimension)
            throw std::invalid_argument("GPHyperparams: length scale count != dimension");
        for (double ell : length_scales)
            if (!(ell > 0.0))
                throw std::invalid_argument("GPHyperparams: length scales must be positive");
        if (!(signal_variance > 0.0))
            throw std::invalid_argument("GPHyperparams: signal_variance must be positive");
        if (!(noise_variance >= 0.0))
            throw std::invalid_argument("GPHyperparams: noise_variance must be nonnegative");
        if (!(jitter >= 0.0))
            throw std::invalid_argument("GPHyperparams: jitter must be nonnegative");
    }

    static GPHyperparams defaults(std::size_t dimension) {
        GPHyperparams h;
        h.length_scales.assign(dimension, 0.5);
        return h;
    }
};

/// Squared-exponential kernel over the yaw-wrapped config metric:
/// signal_variance * exp(-d(a, b)^2 / 2).
inline double se_kernel(const OrientationConfig &a, const OrientationConfig &b,
                        const GPHyperparams &hyper) {
    double d = config_distance(a, b, hyper.length_scales);
    return hyper.signal_variance * std::exp(-0.5 * d * d);
}

struct GPPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

// Gaussian-process regressor on orientation configs. Targets are z-scored
// internally; predictions are mapped back to capacity units. A
// default-constructed model is the pure prior (mean 0, variance
// signal_variance).
class GPModel {
  public:
    GPModel() = default;
    explicit GPModel(GPHyperparams prior) : hyper_(std::move(prior)) {}

    static GPModel fit(std::span<const OrientationConfig> inputs,
                       std::span<const double> targets, GPHyperparams hyper) {
        if (inputs.empty() || inputs.size() != targets.size())
            throw std::invalid_argument("gp_fit: need equal nonzero input/target counts");
        hyper.validate(inputs.front().dimension());
        for (double y : targets)
            if (!std::isfinite(y))
                throw std::invalid_argument("gp_fit: non-finite target");

        GPModel model(hyper);
        model.inputs_.assign(inputs.begin(), inputs.end());
        const Eigen::Index n = static_cast<Eigen::Index>(inputs.size());

        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i)
            y(i) = targets[i];
        model.y_mean_ = y.mean();
        double var = (y.array() - model.y_mean_).square().sum() / static_cast<double>(n);
        model.y_scale_ = var > 0.0 ? std::sqrt(var) : 1.0;
        Eigen::VectorXd ys = (y.array() - model.y_mean_) / model.y_scale_;

        Eigen::MatrixXd k(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                double v = se_kernel(model.inputs_[i], model.inputs_[j], hyper);
                k(i, j) = v;
                k(j, i) = v;
            }
        }

        // Factorize K + (noise + jitter) I, escalating the jitter by up to
        // three decades if the factorization fails.
        double base = hyper.jitter > 0.0 ? hyper.jitter : 1e-12;
        for (int attempt = 0; attempt <= 3; ++attempt) {
            double jit = attempt == 0 ? hyper.jitter : base * std::pow(10.0, attempt);
            Eigen::MatrixXd ka = k;
            ka.diagonal().array() += hyper.noise_variance + jit;
            Eigen::LLT<Eigen::MatrixXd> llt(ka);
            if (llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all()) {
                model.chol_ = llt.matrixL();
                model.jitter_eff_ = jit;
                model.alpha_ = llt.solve(ys);
                model.ys_ = std::move(ys);
                return model;
            }
        }
        throw std::runtime_error("gp_fit: covariance factorization failed after jitter escalation");
    }

    bool empty() const { return inputs_.empty(); }
    std::size_t size() const { return inputs_.size(); }
    const GPHyperparams &hyper() const { return hyper_; }
    const std::vector<OrientationConfig> &inputs() const { return inputs_; }
    double target_mean() const { return y_mean_; }
    double target_scale() const { return y_scale_; }
    double effective_jitter() const { return jitter_eff_; }
    const Eigen::MatrixXd &chol_factor() const { return chol_; }
    const Eigen::VectorXd &weights() const { return alpha_; }

    /// Posterior mean/variance in standardized target units.
    GPPrediction predict_standardized(const OrientationConfig &x) const {
        if (empty())
            return {0.0, hyper_.signal_variance};
        const Eigen::Index n = static_cast<Eigen::Index>(inputs_.size());
        Eigen::VectorXd ks(n);
        for (Eigen::Index i = 0; i < n; ++i)
            ks(i) = se_kernel(x, inputs_[i], hyper_);
        double mean = ks.dot(alpha_);
        Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(ks);
        double variance = hyper_.signal_variance - v.squaredNorm();
        if (variance < 0.0) {
            if (variance < -1e-6)
                throw std::runtime_error("gp_predict: variance underflowed clamp tolerance");
            variance = 0.0;
        }
        return {mean, variance};
    }

    /// Posterior in original target units.
    GPPrediction predict(const OrientationConfig &x) const {
        GPPrediction p = predict_standardized(x);
        return {y_mean_ + y_scale_ * p.mean, y_scale_ * y_scale_ * p.variance};
    }

    /// Log marginal likelihood of the standardized targets.
    double log_marginal_likelihood() const {
        if (empty())
            return 0.0;
        const double n = static_cast<double>(inputs_.size());
        double log_det_half = chol_.diagonal().array().log().sum();
        return -0.5 * ys_.dot(alpha_) - log_det_half - 0.5 * n * std::log(kTwoPi);
    }

  private:
    std::vector<OrientationConfig> inputs_;
    GPHyperparams hyper_;
    Eigen::MatrixXd chol_;  // lower-triangular factor of K + (noise + jitter) I
    Eigen::VectorXd alpha_; // (K + (noise + jitter) I)^-1 y_standardized
    Eigen::VectorXd ys_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    double jitter_eff_ = 0.0;
};

inline GPModel gp_fit(std::span<const OrientationConfig> inputs, std::span<const double> targets,
                      const GPHyperparams &hyper) {
    return GPModel::fit(inputs, targets, hyper);
}

inline GPPrediction gp_predict(const GPModel &model, const OrientationConfig &x) {
    return model.predict(x);
}

} // namespace antopt
