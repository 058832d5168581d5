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

#include "antopt/experiment.hpp"
#include "antopt/report.hpp"
#include "antopt/trace_io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace antopt;

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string scenario;
    std::optional<int> budget;
    std::string strategies;
    bool no_svg = false;
};

void add_common_options(CLI::App *cmd, Overrides &ov) {
    cmd->add_option("--config", ov.config_path, "experiment config file (key = value lines)");
    cmd->add_option("--out", ov.out_dir, "output directory (overrides out_dir)");
    cmd->add_option("--seed", ov.seed, "overrides base_seed");
    cmd->add_option("--scenario", ov.scenario, "TX configuration: V or S");
    cmd->add_option("--budget", ov.budget, "trials per run");
    cmd->add_option("--strategies", ov.strategies, "comma list: bayesopt,random,sobol");
    cmd->add_flag("--no-svg", ov.no_svg, "skip the convergence plot");
}

ExperimentConfig resolve_config(const Overrides &ov) {
    ExperimentConfig cfg;
    if (!ov.config_path.empty())
        cfg = parse_experiment_config(read_file(ov.config_path));
    if (!ov.out_dir.empty())
        cfg.out_dir = ov.out_dir;
    if (ov.seed)
        cfg.base_seed = *ov.seed;
    if (!ov.scenario.empty())
        cfg.scenario = parse_scenario(ov.scenario);
    if (ov.budget)
        cfg.budget = *ov.budget;
    if (!ov.strategies.empty()) {
        cfg.strategies.clear();
        for (const auto &name : detail::split_list(ov.strategies))
            cfg.strategies.push_back(parse_strategy(name));
    }
    cfg.validate();
    return cfg;
}

std::filesystem::path ensure_out_dir(const ExperimentConfig &cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void emit_comparison_outputs(const ComparisonResult &result, bool no_svg) {
    auto dir = ensure_out_dir(result.config);
    emit_convergence_csv(result, dir / "convergence.csv");
    emit_summary_csv(result, dir / "summary.csv");
    if (!no_svg)
        emit_convergence_svg(result, dir / "convergence.svg");
    write_run_manifest(result, dir / "run-manifest.txt");

    for (const auto &sr : result.strategies)
        std::cout << strategy_name(sr.strategy) << ": final mean best-so-far "
                  << sr.summary.back().mean_mbps << " Mbps (+/- "
                  << sr.summary.back().ci95_half_mbps << ")\n";
    std::cout << "outputs written to " << dir.string() << "\n";
}

std::string orientation_deg_string(const OrientationConfig &config) {
    std::string s;
    for (std::size_t i = 0; i < config.n_antennas(); ++i) {
        const auto &a = config.antenna(i);
        if (i)
            s += "  ";
        s += "ant" + std::to_string(i + 1) + "(yaw " + format_double(rad2deg(a.yaw_rad)) +
             ", roll " + format_double(rad2deg(a.roll_rad)) + ")";
    }
    return s;
}

// Grid orientations with the same stepping rule as the grid oracle.
std::vector<OrientationConfig> grid_orientations(const SearchDomain &dom, double step_deg) {
    const double step = deg2rad(step_deg);
    std::vector<std::vector<double>> values(dom.size());
    for (std::size_t d = 0; d < dom.size(); ++d) {
        const auto &dim = dom.dims[d];
        for (std::uint64_t i = 0;; ++i) {
            double v = dim.lo + static_cast<double>(i) * step;
            if (dim.periodic ? (v >= dim.hi - 1e-9) : (v > dim.hi + 1e-9))
                break;
            values[d].push_back(v);
        }
        if (values[d].size() < 2)
            throw std::invalid_argument("step must split every dimension into >= 2 points");
    }
    std::vector<OrientationConfig> out;
    std::vector<std::size_t> idx(dom.size(), 0);
    while (true) {
        std::vector<AnglePair> antennas(dom.size() / 2);
        for (std::size_t d = 0; d < dom.size(); ++d) {
            double v = values[d][idx[d]];
            if (d % 2 == 0)
                antennas[d / 2].yaw_rad = v;
            else
                antennas[d / 2].roll_rad = v;
        }
        out.push_back(OrientationConfig::from_radians(std::move(antennas)));
        std::size_t d = dom.size();
        while (d > 0) {
            --d;
            if (++idx[d] < values[d].size())
                break;
            idx[d] = 0;
            if (d == 0)
                return out;
        }
    }
}

int cmd_compare(const Overrides &ov) {
    ExperimentConfig cfg = resolve_config(ov);
    ComparisonResult result = run_comparison(cfg);
    emit_comparison_outputs(result, ov.no_svg);
    return 0;
}

int cmd_optimize(const Overrides &ov, const std::string &strategy_str) {
    ExperimentConfig cfg = resolve_config(ov);
    cfg.strategies = {parse_strategy(strategy_str)};
    cfg.replications = 1;
    ComparisonResult result = run_comparison(cfg);
    emit_comparison_outputs(result, ov.no_svg);

    const auto &trace = result.strategies.front().traces.front();
    const auto &best = trace.best_sample();
    std::cout << "best orientation: " << orientation_deg_string(best.config) << "\n";
    std::cout << "best capacity: " << format_double(best.capacity.bits_per_s_per_hz)
              << " bits/s/Hz (" << best.capacity.bits_per_s_per_hz * cfg.bandwidth_hz / 1e6
              << " Mbps)\n";
    return 0;
}

int cmd_oracle(const Overrides &ov, double step_deg) {
    ExperimentConfig cfg = resolve_config(ov);
    Scene scene = make_scene(cfg.scenario, cfg.scene_seed, cfg.scene);
    SimulatedEnvironment env(scene, SnrLinear::from_db(cfg.snr_db),
                             std::pow(10.0, cfg.measurement_snr_db / 10.0), cfg.n_snapshots,
                             cfg.base_seed);
    GridOracleResult oracle = grid_oracle(env, step_deg);
    auto dir = ensure_out_dir(cfg);
    emit_oracle_csv(oracle, cfg.bandwidth_hz, dir / "oracle.csv");

    ComparisonResult manifest;
    manifest.config = cfg;
    manifest.oracle_best_mbps = oracle.value.bits_per_s_per_hz * cfg.bandwidth_hz / 1e6;
    write_run_manifest(manifest, dir / "run-manifest.txt");

    double spread = landscape_spread_bps_hz(oracle);
    std::cout << "grid step: " << step_deg << " deg, " << oracle.landscape.size() << " points\n";
    std::cout << "best orientation: " << orientation_deg_string(oracle.best) << "\n";
    std::cout << "best capacity: " << format_double(oracle.value.bits_per_s_per_hz)
              << " bits/s/Hz (" << oracle.value.bits_per_s_per_hz * cfg.bandwidth_hz / 1e6
              << " Mbps)\n";
    std::cout << "landscape spread: " << spread * cfg.bandwidth_hz / 1e6 << " Mbps\n";
    std::cout << "oracle written to " << (dir / "oracle.csv").string() << "\n";
    return 0;
}

int cmd_replay(const Overrides &ov, const std::string &trace_path) {
    ExperimentConfig cfg = resolve_config(ov);
    CsiTrace trace = load_trace(trace_path);
    ComparisonResult result = run_comparison_on(
        cfg, [&](std::uint64_t) { return std::make_unique<TraceEnvironment>(trace); });
    emit_comparison_outputs(result, ov.no_svg);
    return 0;
}

int cmd_trace_gen(const Overrides &ov, double step_deg, std::string out_file) {
    ExperimentConfig cfg = resolve_config(ov);
    Scene scene = make_scene(cfg.scenario, cfg.scene_seed, cfg.scene);
    PathTable table(scene);

    CsiTrace trace;
    trace.snr = SnrLinear::from_db(cfg.snr_db);
    trace.source = "antopt trace-gen";
    for (const auto &o : grid_orientations(SearchDomain::full(scene.rx_positions.size()), step_deg))
        trace.grid.push_back({o, table.synthesize(o)});

    std::filesystem::path path;
    if (!out_file.empty()) {
        path = out_file;
        if (path.has_parent_path())
            std::filesystem::create_directories(path.parent_path());
    } else {
        path = ensure_out_dir(cfg) / "trace.csv";
    }
    write_trace(trace, path);
    std::cout << "wrote " << trace.grid.size() << " orientations to " << path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"antopt: antenna orientation tuning experiments in simulation"};
    app.require_subcommand(1);

    Overrides ov_compare, ov_optimize, ov_oracle, ov_replay, ov_gen;
    std::string strategy = "bayesopt";
    std::string trace_path;
    std::string out_file;
    double oracle_step = 15.0;
    double gen_step = 45.0;

    auto *compare = app.add_subcommand("compare", "run all strategies and emit convergence data");
    add_common_options(compare, ov_compare);

    auto *optimize = app.add_subcommand("optimize", "single-strategy optimization run");
    add_common_options(optimize, ov_optimize);
    optimize->add_option("--strategy", strategy, "bayesopt | random | sobol");

    auto *oracle = app.add_subcommand("oracle", "exhaustive grid landscape and spread report");
    add_common_options(oracle, ov_oracle);
    oracle->add_option("--step", oracle_step, "grid step in degrees");

    auto *replay = app.add_subcommand("replay", "run strategies against a recorded CSI trace");
    add_common_options(replay, ov_replay);
    replay->add_option("--trace", trace_path, "CSI trace file")->required();

    auto *gen = app.add_subcommand("trace-gen", "dump a simulator landscape as a CSI trace");
    add_common_options(gen, ov_gen);
    gen->add_option("--step", gen_step, "grid step in degrees");
    gen->add_option("--out-file", out_file, "trace file path (default <out>/trace.csv)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed())
            return cmd_compare(ov_compare);
        if (optimize->parsed())
            return cmd_optimize(ov_optimize, strategy);
        if (oracle->parsed())
            return cmd_oracle(ov_oracle, oracle_step);
        if (replay->parsed())
            return cmd_replay(ov_replay, trace_path);
        if (gen->parsed())
            return cmd_trace_gen(ov_gen, gen_step, out_file);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
