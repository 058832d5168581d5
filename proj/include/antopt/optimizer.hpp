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

#include "antopt/environment.hpp"
#include "antopt/gp.hpp"
#include "antopt/sobol.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace antopt {

enum class Strategy { kBayesOpt, kRandom, kSobol };

inline const char *strategy_name(Strategy s) {
    switch (s) {
    case Strategy::kBayesOpt:
        return "bayesopt";
    case Strategy::kRandom:
        return "random";
    case Strategy::kSobol:
        return "sobol";
    }
    return "?";
}

inline Strategy parse_strategy(const std::string &s) {
    if (s == "bayesopt")
        return Strategy::kBayesOpt;
    if (s == "random")
        return Strategy::kRandom;
    if (s == "sobol")
        return Strategy::kSobol;
    throw std::invalid_argument("strategy: expected bayesopt, random or sobol, got '" + s + "'");
}

struct OptimizerParams {
    double beta = 4.0;          // UCB exploration weight (score = mean + sqrt(beta) * std)
    int n_init = 8;             // Sobol warm-up evaluations, counted against the budget
    int n_candidates = 4096;    // acquisition candidate pool per iteration
    double quantization_deg = 1.0; // servo resolution; applied to every strategy
    std::vector<double> length_scales; // radians; empty = 0.5 per dimension
    double signal_variance = 1.0;
    double noise_variance = 0.01;
    double jitter = 1e-8;
    bool hyper_search = false; // log-marginal-likelihood grid over length scales

    bool operator==(const OptimizerParams &) const = default;

    GPHyperparams gp_hyper(std::size_t dimension) const {
        GPHyperparams h;
        if (length_scales.empty())
            h.length_scales.assign(dimension, 0.5);
        else if (length_scales.size() == 1)
            h.length_scales.assign(dimension, length_scales.front()); // scalar broadcast
        else
            h.length_scales = length_scales;
        h.signal_variance = signal_variance;
        h.noise_variance = noise_variance;
        h.jitter = jitter;
        h.validate(dimension);
        return h;
    }
};

struct TraceSample {
    int trial = 0; // 1-based
    OrientationConfig config;
    CapacityValue capacity;
};

// Ordered evaluation history of one optimization run.
struct OptimizationTrace {
    std::vector<TraceSample> samples;
    std::vector<double> best_so_far; // running max, same length as samples
    Strategy strategy = Strategy::kBayesOpt;
    std::uint64_t seed = 0;

    const TraceSample &best_sample() const {
        const TraceSample *best = &samples.front();
        for (const auto &s : samples)
            if (s.capacity.bits_per_s_per_hz > best->capacity.bits_per_s_per_hz)
                best = &s;
        return *best;
    }
};

/// Affine map from the unit cube onto the search domain, with yaw wrap and
/// roll clamp applied through the config constructor.
inline OrientationConfig scale_to_domain(std::span<const double> u, const SearchDomain &domain) {
    if (u.size() != domain.size())
        throw std::domain_error("scale_to_domain: dimension mismatch");
    if (domain.size() % 2 != 0)
        throw std::domain_error("scale_to_domain: odd dimension count");
    std::vector<AnglePair> antennas(domain.size() / 2);
    for (std::size_t d = 0; d < domain.size(); ++d) {
        const auto &dim = domain.dims[d];
        if (!(dim.lo < dim.hi))
            throw std::domain_error("scale_to_domain: invalid bounds");
        if (u[d] < 0.0 || u[d] >= 1.0)
            throw std::domain_error("scale_to_domain: unit coordinate out of [0, 1)");
        double v = dim.lo + u[d] * (dim.hi - dim.lo);
        if (d % 2 == 0)
            antennas[d / 2].yaw_rad = v;
        else
            antennas[d / 2].roll_rad = v;
    }
    return OrientationConfig::from_radians(std::move(antennas));
}

/// Snaps every angle to the servo grid (step in degrees). Yaw snaps on the
/// periodic grid (360 wraps to 0); roll stays clamped to [0, 180].
inline OrientationConfig quantize_config(const OrientationConfig &c, double step_deg) {
    if (!(step_deg > 0.0))
        throw std::domain_error("quantize_config: step must be positive");
    std::vector<AnglePair> antennas(c.n_antennas());
    for (std::size_t i = 0; i < c.n_antennas(); ++i) {
        double yaw_deg = std::round(rad2deg(c.antenna(i).yaw_rad) / step_deg) * step_deg;
        double roll_deg = std::round(rad2deg(c.antenna(i).roll_rad) / step_deg) * step_deg;
        antennas[i].yaw_rad = deg2rad(yaw_deg);
        antennas[i].roll_rad = deg2rad(std::clamp(roll_deg, 0.0, 180.0));
    }
    return OrientationConfig::from_radians(std::move(antennas));
}

/// Upper confidence bound: mean + sqrt(beta) * sqrt(variance).
inline double ucb_score(double mean, double variance, double beta) {
    if (variance < 0.0) {
        if (variance < -1e-10)
            throw std::domain_error("ucb_score: negative variance");
        variance = 0.0;
    }
    if (!(beta >= 0.0))
        throw std::domain_error("ucb_score: beta must be nonnegative");
    return mean + std::sqrt(beta) * std::sqrt(variance);
}

/// Returns the candidate maximizing the UCB acquisition; ties keep the
/// lowest index. Candidates are expected to be on the servo grid already.
inline OrientationConfig propose_next(const GPModel &model,
                                      std::span<const OrientationConfig> candidates,
                                      double beta) {
    if (candidates.empty())
        throw std::domain_error("propose_next: empty candidate list");
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        GPPrediction p = model.predict(candidates[i]);
        double score = ucb_score(p.mean, p.variance, beta);
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return candidates[best];
}

namespace detail {

inline OrientationConfig sobol_config(SobolSequence &seq, const SearchDomain &domain,
                                      double quant_deg, std::vector<double> &scratch) {
    seq.next_into(scratch);
    return quantize_config(scale_to_domain(scratch, domain), quant_deg);
}

// Log-marginal-likelihood grid search: every length scale tries
// {0.5x, 1x, 2x} of its configured value.
inline GPModel fit_with_hyper_search(std::span<const OrientationConfig> inputs,
                                     std::span<const double> targets,
                                     const GPHyperparams &base) {
    const std::size_t dim = base.length_scales.size();
    const double factors[3] = {0.5, 1.0, 2.0};
    GPModel best;
    double best_lml = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
        GPHyperparams h = base;
        for (std::size_t d = 0; d < dim; ++d)
            h.length_scales[d] = base.length_scales[d] * factors[idx[d]];
        GPModel m = GPModel::fit(inputs, targets, h);
        double lml = m.log_marginal_likelihood();
        if (lml > best_lml) {
            best_lml = lml;
            best = std::move(m);
        }
        std::size_t d = 0;
        for (; d < dim; ++d) {
            if (++idx[d] < 3)
                break;
            idx[d] = 0;
        }
        if (d == dim)
            return best;
    }
}

} // namespace detail

/// Runs one search strategy against an environment for exactly `budget`
/// evaluations and records the trace. Fully reproducible given (strategy,
/// seed, environment state).
inline OptimizationTrace run_optimizer(Strategy strategy, Environment &env, int budget,
                                       const OptimizerParams &params, std::uint64_t seed) {
    if (budget < 1)
        throw std::invalid_argument("run_optimizer: budget must be >= 1");
    if (strategy == Strategy::kBayesOpt && budget < params.n_init)
        throw std::invalid_argument("run_optimizer: budget smaller than bayesopt n_init");

    const SearchDomain domain = env.domain();
    const std::size_t dim = domain.size();

    OptimizationTrace trace;
    trace.strategy = strategy;
    trace.seed = seed;
    trace.samples.reserve(budget);
    trace.best_so_far.reserve(budget);

    auto record = [&](const OrientationConfig &config) {
        CapacitySample sample = env.evaluate(config);
        double c = sample.capacity.bits_per_s_per_hz;
        double best = trace.best_so_far.empty() ? c : std::max(trace.best_so_far.back(), c);
        trace.samples.push_back(
            {static_cast<int>(trace.samples.size()) + 1, config, sample.capacity});
        trace.best_so_far.push_back(best);
    };

    std::vector<double> scratch(dim);

    switch (strategy) {
    case Strategy::kRandom: {
        std::mt19937_64 rng(seed);
        for (int t = 0; t < budget; ++t) {
            for (std::size_t d = 0; d < dim; ++d)
                scratch[d] = detail::uniform01(rng);
            record(quantize_config(scale_to_domain(scratch, domain), params.quantization_deg));
        }
        break;
    }
    case Strategy::kSobol: {
        SobolSequence seq(static_cast<int>(dim));
        for (int t = 0; t < budget; ++t)
            record(detail::sobol_config(seq, domain, params.quantization_deg, scratch));
        break;
    }
    case Strategy::kBayesOpt: {
        GPHyperparams hyper = params.gp_hyper(dim);

        SobolSequence warmup(static_cast<int>(dim));
        for (int t = 0; t < params.n_init && t < budget; ++t)
            record(detail::sobol_config(warmup, domain, params.quantization_deg, scratch));

        // Candidate pools come from disjoint Sobol blocks; the block base is
        // seed-derived so distinct seeds explore distinct pools.
        SobolSequence candidates_seq(static_cast<int>(dim));
        const std::uint64_t block_base = 1 + (seed % 4096);

        std::vector<OrientationConfig> inputs;
        std::vector<double> targets;
        for (int t = params.n_init; t < budget; ++t) {
            inputs.clear();
            targets.clear();
            std::size_t incumbent = 0;
            for (const auto &s : trace.samples) {
                if (s.capacity.bits_per_s_per_hz >
                    trace.samples[incumbent].capacity.bits_per_s_per_hz)
                    incumbent = inputs.size();
                inputs.push_back(s.config);
                targets.push_back(s.capacity.bits_per_s_per_hz);
            }
            GPModel model = params.hyper_search
                                ? detail::fit_with_hyper_search(inputs, targets, hyper)
                                : GPModel::fit(inputs, targets, hyper);

            candidates_seq.seek((block_base + static_cast<std::uint64_t>(t)) *
                                static_cast<std::uint64_t>(params.n_candidates));
            std::vector<OrientationConfig> pool;
            pool.reserve(params.n_candidates + 8 * dim);
            for (int c = 0; c < params.n_candidates; ++c)
                pool.push_back(
                    detail::sobol_config(candidates_seq, domain, params.quantization_deg, scratch));

            // Multi-scale axial offsets around the incumbent. The global
            // pool locates the basin; these let the acquisition exploit it
            // down to servo resolution without any gradient steps.
            std::vector<double> base = inputs[incumbent].coords();
            for (std::size_t d = 0; d < dim; ++d)
                for (double mag_deg : {1.0, 3.0, 9.0, 27.0})
                    for (double sign : {-1.0, 1.0}) {
                        std::vector<AnglePair> antennas(dim / 2);
                        for (std::size_t e = 0; e < dim; ++e) {
                            double v = base[e] + (e == d ? sign * deg2rad(mag_deg) : 0.0);
                            if (e % 2 == 0)
                                antennas[e / 2].yaw_rad = v;
                            else
                                antennas[e / 2].roll_rad = v;
                        }
                        pool.push_back(quantize_config(
                            OrientationConfig::from_radians(std::move(antennas)),
                            params.quantization_deg));
                    }

            record(propose_next(model, pool, params.beta));
        }
        break;
    }
    }
    return trace;
}

} // namespace antopt
