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
#include "antopt/io.hpp"
#include "antopt/optimizer.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace antopt {

// Fully resolved description of one comparison experiment. Parsed from a
// flat `key = value` text file; every field has a documented default so the
// minimal config is a single `scenario` line.
struct ExperimentConfig {
    TxScenario scenario = TxScenario::kVertical;
    std::uint64_t scene_seed = 1;
    double snr_db = 20.0;
    double measurement_snr_db = 20.0;
    int n_snapshots = 10;
    int budget = 50;
    std::vector<Strategy> strategies = {Strategy::kBayesOpt, Strategy::kRandom, Strategy::kSobol};
    int replications = 10;
    std::uint64_t base_seed = 1;
    double bandwidth_hz = 20e6;
    double noise_floor_dbm = -94.0;
    OptimizerParams optimizer;
    SceneParams scene;
    std::string out_dir = "out";

    bool operator==(const ExperimentConfig &) const = default;

    void validate() const {
        if (budget < 1)
            throw std::invalid_argument("config: budget must be >= 1");
        if (replications < 1)
            throw std::invalid_argument("config: replications must be >= 1");
        if (strategies.empty())
            throw std::invalid_argument("config: strategies must be nonempty");
        if (n_snapshots < 1)
            throw std::invalid_argument("config: n_snapshots must be >= 1");
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("config: bandwidth_hz must be positive");
        if (optimizer.n_init < 1)
            throw std::invalid_argument("config: n_init must be >= 1");
        if (optimizer.n_candidates < 1)
            throw std::invalid_argument("config: candidates must be >= 1");
        if (!(optimizer.quantization_deg > 0.0))
            throw std::invalid_argument("config: quantization_deg must be positive");
        if (!(optimizer.beta >= 0.0))
            throw std::invalid_argument("config: beta must be nonnegative");
        for (double ell : optimizer.length_scales)
            if (!(ell > 0.0))
                throw std::invalid_argument("config: length_scales_rad must be positive");
        if (scene.n_scatterers < 0)
            throw std::invalid_argument("config: n_scatterers must be >= 0");
        if (scene.n_subcarriers < 1)
            throw std::invalid_argument("config: num_subcarriers must be >= 1");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
}

inline double to_double(const std::string &v, const std::string &key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception &) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

inline std::int64_t to_int(const std::string &v, const std::string &key) {
    try {
        std::size_t pos = 0;
        std::int64_t i = std::stoll(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception &) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v +
                                    "'");
    }
}

inline std::uint64_t to_uint(const std::string &v, const std::string &key) {
    try {
        std::size_t pos = 0;
        std::uint64_t i = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return i;
    } catch (const std::exception &) {
        throw std::invalid_argument("config: key '" + key + "' expects an unsigned integer, got '" +
                                    v + "'");
    }
}

inline bool to_onoff(const std::string &v, const std::string &key) {
    if (v == "on" || v == "true" || v == "1")
        return true;
    if (v == "off" || v == "false" || v == "0")
        return false;
    throw std::invalid_argument("config: key '" + key + "' expects on/off, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string &v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

} // namespace detail

inline ExperimentConfig parse_experiment_config(std::string_view text) {
    ExperimentConfig cfg;
    std::optional<double> rssi_dbm;
    bool snr_set = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not of the form key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));

        if (key == "scenario") {
            cfg.scenario = parse_scenario(value);
        } else if (key == "scene_seed") {
            cfg.scene_seed = detail::to_uint(value, key);
        } else if (key == "snr_db") {
            cfg.snr_db = detail::to_double(value, key);
            snr_set = true;
        } else if (key == "rssi_dbm") {
            rssi_dbm = detail::to_double(value, key);
        } else if (key == "noise_floor_dbm") {
            cfg.noise_floor_dbm = detail::to_double(value, key);
        } else if (key == "measurement_snr_db") {
            cfg.measurement_snr_db = detail::to_double(value, key);
        } else if (key == "n_snapshots") {
            cfg.n_snapshots = static_cast<int>(detail::to_int(value, key));
        } else if (key == "budget") {
            cfg.budget = static_cast<int>(detail::to_int(value, key));
        } else if (key == "strategies") {
            cfg.strategies.clear();
            for (const auto &name : detail::split_list(value))
                cfg.strategies.push_back(parse_strategy(name));
        } else if (key == "replications") {
            cfg.replications = static_cast<int>(detail::to_int(value, key));
        } else if (key == "base_seed") {
            cfg.base_seed = detail::to_uint(value, key);
        } else if (key == "bandwidth_hz") {
            cfg.bandwidth_hz = detail::to_double(value, key);
        } else if (key == "beta") {
            cfg.optimizer.beta = detail::to_double(value, key);
        } else if (key == "n_init") {
            cfg.optimizer.n_init = static_cast<int>(detail::to_int(value, key));
        } else if (key == "candidates") {
            cfg.optimizer.n_candidates = static_cast<int>(detail::to_int(value, key));
        } else if (key == "quantization_deg") {
            cfg.optimizer.quantization_deg = detail::to_double(value, key);
        } else if (key == "length_scales_rad") {
            cfg.optimizer.length_scales.clear();
            for (const auto &item : detail::split_list(value))
                cfg.optimizer.length_scales.push_back(detail::to_double(item, key));
        } else if (key == "gp_signal_variance") {
            cfg.optimizer.signal_variance = detail::to_double(value, key);
        } else if (key == "gp_noise_variance") {
            cfg.optimizer.noise_variance = detail::to_double(value, key);
        } else if (key == "gp_jitter") {
            cfg.optimizer.jitter = detail::to_double(value, key);
        } else if (key == "gp_hyper_search") {
            cfg.optimizer.hyper_search = detail::to_onoff(value, key);
        } else if (key == "n_scatterers") {
            cfg.scene.n_scatterers = static_cast<int>(detail::to_int(value, key));
        } else if (key == "los_k_factor_db") {
            cfg.scene.los_k_factor_db = detail::to_double(value, key);
        } else if (key == "carrier_freq_hz") {
            cfg.scene.carrier_freq_hz = detail::to_double(value, key);
        } else if (key == "subcarrier_spacing_hz") {
            cfg.scene.subcarrier_spacing_hz = detail::to_double(value, key);
        } else if (key == "num_subcarriers") {
            cfg.scene.n_subcarriers = static_cast<int>(detail::to_int(value, key));
        } else if (key == "link_distance_m") {
            cfg.scene.link_distance_m = detail::to_double(value, key);
        } else if (key == "antenna_spacing_m") {
            cfg.scene.antenna_spacing_m = detail::to_double(value, key);
        } else if (key == "antenna_height_m") {
            cfg.scene.antenna_height_m = detail::to_double(value, key);
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }

    if (rssi_dbm) {
        if (snr_set)
            throw std::invalid_argument("config: keys 'snr_db' and 'rssi_dbm' conflict");
        cfg.snr_db = snr_from_rssi(*rssi_dbm, cfg.noise_floor_dbm).db();
    }

    cfg.validate();
    return cfg;
}

inline std::string serialize_experiment_config(const ExperimentConfig &cfg) {
    std::string out;
    auto kv = [&out](const std::string &k, const std::string &v) { out += k + " = " + v + "\n"; };

    kv("scenario", scenario_name(cfg.scenario));
    kv("scene_seed", std::to_string(cfg.scene_seed));
    kv("snr_db", format_double(cfg.snr_db));
    kv("noise_floor_dbm", format_double(cfg.noise_floor_dbm));
    kv("measurement_snr_db", format_double(cfg.measurement_snr_db));
    kv("n_snapshots", std::to_string(cfg.n_snapshots));
    kv("budget", std::to_string(cfg.budget));
    std::string strategies;
    for (const auto &s : cfg.strategies)
        strategies += (strategies.empty() ? "" : ",") + std::string(strategy_name(s));
    kv("strategies", strategies);
    kv("replications", std::to_string(cfg.replications));
    kv("base_seed", std::to_string(cfg.base_seed));
    kv("bandwidth_hz", format_double(cfg.bandwidth_hz));
    kv("beta", format_double(cfg.optimizer.beta));
    kv("n_init", std::to_string(cfg.optimizer.n_init));
    kv("candidates", std::to_string(cfg.optimizer.n_candidates));
    kv("quantization_deg", format_double(cfg.optimizer.quantization_deg));
    if (!cfg.optimizer.length_scales.empty()) {
        std::string ls;
        for (double ell : cfg.optimizer.length_scales)
            ls += (ls.empty() ? "" : ",") + format_double(ell);
        kv("length_scales_rad", ls);
    }
    kv("gp_signal_variance", format_double(cfg.optimizer.signal_variance));
    kv("gp_noise_variance", format_double(cfg.optimizer.noise_variance));
    kv("gp_jitter", format_double(cfg.optimizer.jitter));
    kv("gp_hyper_search", cfg.optimizer.hyper_search ? "on" : "off");
    kv("n_scatterers", std::to_string(cfg.scene.n_scatterers));
    kv("los_k_factor_db", format_double(cfg.scene.los_k_factor_db));
    kv("carrier_freq_hz", format_double(cfg.scene.carrier_freq_hz));
    kv("subcarrier_spacing_hz", format_double(cfg.scene.subcarrier_spacing_hz));
    kv("num_subcarriers", std::to_string(cfg.scene.n_subcarriers));
    kv("link_distance_m", format_double(cfg.scene.link_distance_m));
    kv("antenna_spacing_m", format_double(cfg.scene.antenna_spacing_m));
    kv("antenna_height_m", format_double(cfg.scene.antenna_height_m));
    kv("out_dir", cfg.out_dir);
    return out;
}

/// Stable FNV-1a-based derivation: the optimizer stream for (strategy,
/// replication) and the environment stream for a replication never move
/// when other strategies are added or removed.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label, int replication) {
    std::uint64_t h = 1469598103934665603ull; // FNV offset basis
    auto mix = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull; // FNV prime
    };
    for (char c : label)
        mix(c);
    mix('/');
    for (char c : std::to_string(replication))
        mix(c);
    return base ^ h;
}

struct TrialSummary {
    int trial = 0;
    double mean_mbps = 0.0;
    double ci95_half_mbps = 0.0;
};

struct StrategyResult {
    Strategy strategy = Strategy::kBayesOpt;
    std::vector<OptimizationTrace> traces; // one per replication
    std::vector<TrialSummary> summary;     // one per trial
};

struct ComparisonResult {
    ExperimentConfig config;
    std::vector<StrategyResult> strategies;
    std::optional<double> oracle_best_mbps;
};

using EnvironmentFactory = std::function<std::unique_ptr<Environment>(std::uint64_t seed)>;

/// Runs every configured strategy for every replication against a fresh
/// environment clone. Environments are seeded per replication only, so
/// strategies face paired measurement-noise streams.
inline ComparisonResult run_comparison_on(const ExperimentConfig &cfg,
                                          const EnvironmentFactory &make_env) {
    cfg.validate();
    ComparisonResult result;
    result.config = cfg;

    const double to_mbps = cfg.bandwidth_hz / 1e6;
    for (Strategy strategy : cfg.strategies) {
        StrategyResult sr;
        sr.strategy = strategy;
        for (int rep = 1; rep <= cfg.replications; ++rep) {
            auto env = make_env(derive_seed(cfg.base_seed, "env", rep));
            std::uint64_t seed = derive_seed(cfg.base_seed, strategy_name(strategy), rep);
            sr.traces.push_back(
                run_optimizer(strategy, *env, cfg.budget, cfg.optimizer, seed));
        }

        sr.summary.resize(cfg.budget);
        const double n = static_cast<double>(cfg.replications);
        for (int t = 0; t < cfg.budget; ++t) {
            double mean = 0.0;
            for (const auto &trace : sr.traces)
                mean += trace.best_so_far[t] * to_mbps;
            mean /= n;
            double var = 0.0;
            for (const auto &trace : sr.traces) {
                double d = trace.best_so_far[t] * to_mbps - mean;
                var += d * d;
            }
            double half = cfg.replications > 1
                              ? 1.96 * std::sqrt(var / (n - 1.0)) / std::sqrt(n)
                              : 0.0;
            sr.summary[t] = {t + 1, mean, half};
        }
        result.strategies.push_back(std::move(sr));
    }
    return result;
}

/// Full simulator-backed comparison from one config.
inline ComparisonResult run_comparison(const ExperimentConfig &cfg) {
    cfg.validate();
    Scene scene = make_scene(cfg.scenario, cfg.scene_seed, cfg.scene);
    SnrLinear snr = SnrLinear::from_db(cfg.snr_db);
    double msnr = std::pow(10.0, cfg.measurement_snr_db / 10.0);
    return run_comparison_on(cfg, [&](std::uint64_t seed) {
        return std::make_unique<SimulatedEnvironment>(scene, snr, msnr, cfg.n_snapshots, seed);
    });
}

} // namespace antopt
