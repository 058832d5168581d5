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
#include "antopt/experiment.hpp"
#include "antopt/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>

namespace antopt {

inline constexpr const char *kConvergenceCsvHeader =
    "strategy,replication,trial,yaw1_deg,roll1_deg,yaw2_deg,roll2_deg,"
    "capacity_bps_hz,throughput_mbps,best_so_far_mbps";

/// One row per evaluated sample in (strategy, replication, trial) order.
inline void emit_convergence_csv(const ComparisonResult &result,
                                 const std::filesystem::path &path) {
    const double to_mbps = result.config.bandwidth_hz / 1e6;
    std::string out(kConvergenceCsvHeader);
    out += '\n';
    for (const auto &sr : result.strategies) {
        for (std::size_t rep = 0; rep < sr.traces.size(); ++rep) {
            const auto &trace = sr.traces[rep];
            for (std::size_t i = 0; i < trace.samples.size(); ++i) {
                const auto &s = trace.samples[i];
                out += strategy_name(sr.strategy);
                out += ',' + std::to_string(rep + 1);
                out += ',' + std::to_string(s.trial);
                for (const auto &a : s.config.antennas()) {
                    out += ',' + format_double(rad2deg(a.yaw_rad));
                    out += ',' + format_double(rad2deg(a.roll_rad));
                }
                out += ',' + format_double(s.capacity.bits_per_s_per_hz);
                out += ',' + format_double(s.capacity.bits_per_s_per_hz * to_mbps);
                out += ',' + format_double(trace.best_so_far[i] * to_mbps);
                out += '\n';
            }
        }
    }
    write_file_atomic(path, out);
}

inline void emit_summary_csv(const ComparisonResult &result, const std::filesystem::path &path) {
    std::string out = "strategy,trial,mean_best_mbps,ci95_lo_mbps,ci95_hi_mbps\n";
    for (const auto &sr : result.strategies) {
        for (const auto &row : sr.summary) {
            out += strategy_name(sr.strategy);
            out += ',' + std::to_string(row.trial);
            out += ',' + format_double(row.mean_mbps);
            out += ',' + format_double(row.mean_mbps - row.ci95_half_mbps);
            out += ',' + format_double(row.mean_mbps + row.ci95_half_mbps);
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

inline void emit_oracle_csv(const GridOracleResult &oracle, double bandwidth_hz,
                            const std::filesystem::path &path) {
    const double to_mbps = bandwidth_hz / 1e6;
    std::string out = "yaw1_deg,roll1_deg,yaw2_deg,roll2_deg,capacity_bps_hz,throughput_mbps\n";
    for (const auto &s : oracle.landscape) {
        std::string row;
        for (const auto &a : s.orientation.antennas()) {
            row += format_double(rad2deg(a.yaw_rad)) + ',';
            row += format_double(rad2deg(a.roll_rad)) + ',';
        }
        row += format_double(s.capacity.bits_per_s_per_hz) + ',';
        row += format_double(s.capacity.bits_per_s_per_hz * to_mbps);
        out += row + '\n';
    }
    write_file_atomic(path, out);
}

/// Records the fully resolved configuration of a run.
inline void write_run_manifest(const ComparisonResult &result, const std::filesystem::path &path) {
    std::string out = "# antopt run manifest: resolved configuration\n";
    out += serialize_experiment_config(result.config);
    if (result.oracle_best_mbps)
        out += "# oracle_best_mbps = " + format_double(*result.oracle_best_mbps) + "\n";
    write_file_atomic(path, out);
}

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline const char *strategy_color(Strategy s) {
    switch (s) {
    case Strategy::kBayesOpt:
        return "#1f77b4";
    case Strategy::kRandom:
        return "#ff7f0e";
    case Strategy::kSobol:
        return "#2ca02c";
    }
    return "#000000";
}

} // namespace detail

/// Self-contained convergence plot: one mean best-so-far polyline per
/// strategy plus a shaded 95% CI band, trials on x and Mbps on y.
inline void emit_convergence_svg(const ComparisonResult &result,
                                 const std::filesystem::path &path) {
    const int width = 720, height = 440;
    const double ml = 72, mr = 16, mt = 18, mb = 52;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;
    const int budget = result.config.budget;

    double y_lo = 0.0, y_hi = 1.0;
    bool first = true;
    for (const auto &sr : result.strategies)
        for (const auto &row : sr.summary) {
            double lo = row.mean_mbps - row.ci95_half_mbps;
            double hi = row.mean_mbps + row.ci95_half_mbps;
            if (first) {
                y_lo = lo;
                y_hi = hi;
                first = false;
            } else {
                y_lo = std::min(y_lo, lo);
                y_hi = std::max(y_hi, hi);
            }
        }
    double pad = std::max(1e-6, 0.06 * (y_hi - y_lo));
    y_lo -= pad;
    y_hi += pad;

    auto x_of = [&](double trial) {
        return ml + (budget > 1 ? (trial - 1.0) / (budget - 1.0) : 0.5) * plot_w;
    };
    auto y_of = [&](double mbps) { return mt + (1.0 - (mbps - y_lo) / (y_hi - y_lo)) * plot_h; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes
    svg += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(mt + plot_h) +
           "\" x2=\"" + detail::svg_num(ml + plot_w) + "\" y2=\"" + detail::svg_num(mt + plot_h) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(mt) + "\" x2=\"" +
           detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(mt + plot_h) +
           "\" stroke=\"black\"/>\n";

    // Ticks
    const int n_yticks = 5;
    for (int i = 0; i <= n_yticks; ++i) {
        double v = y_lo + (y_hi - y_lo) * i / n_yticks;
        double y = y_of(v);
        svg += "<line x1=\"" + detail::svg_num(ml - 4) + "\" y1=\"" + detail::svg_num(y) +
               "\" x2=\"" + detail::svg_num(ml) + "\" y2=\"" + detail::svg_num(y) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::svg_num(ml - 8) + "\" y=\"" + detail::svg_num(y + 4) +
               "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">" +
               detail::svg_num(v) + "</text>\n";
    }
    int x_step = std::max(1, budget / 6);
    for (int t = 1; t <= budget; t += x_step) {
        double x = x_of(t);
        svg += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(mt + plot_h) +
               "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(mt + plot_h + 4) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(mt + plot_h + 18) +
               "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" +
               std::to_string(t) + "</text>\n";
    }
    svg += "<text x=\"" + detail::svg_num(ml + plot_w / 2) + "\" y=\"" +
           detail::svg_num(height - 14.0) +
           "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">number of "
           "trials</text>\n";
    svg += "<text x=\"16\" y=\"" + detail::svg_num(mt + plot_h / 2) +
           "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 16 " +
           detail::svg_num(mt + plot_h / 2) +
           ")\">best channel capacity so far [Mbps]</text>\n";

    // CI bands first, then the mean lines on top.
    for (const auto &sr : result.strategies) {
        const char *color = detail::strategy_color(sr.strategy);
        std::string band = "<path d=\"";
        for (std::size_t i = 0; i < sr.summary.size(); ++i) {
            const auto &row = sr.summary[i];
            band += (i == 0 ? "M" : "L");
            band += detail::svg_num(x_of(row.trial)) + " " +
                    detail::svg_num(y_of(row.mean_mbps + row.ci95_half_mbps)) + " ";
        }
        for (std::size_t i = sr.summary.size(); i-- > 0;) {
            const auto &row = sr.summary[i];
            band += "L" + detail::svg_num(x_of(row.trial)) + " " +
                    detail::svg_num(y_of(row.mean_mbps - row.ci95_half_mbps)) + " ";
        }
        band += "Z\" fill=\"" + std::string(color) + "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        svg += band;
    }
    for (const auto &sr : result.strategies) {
        const char *color = detail::strategy_color(sr.strategy);
        std::string line = "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                           "\" stroke-width=\"1.8\" points=\"";
        for (const auto &row : sr.summary)
            line += detail::svg_num(x_of(row.trial)) + "," + detail::svg_num(y_of(row.mean_mbps)) +
                    " ";
        line += "\"/>\n";
        svg += line;
    }

    // Legend
    double lx = ml + 12, ly = mt + 12;
    for (const auto &sr : result.strategies) {
        const char *color = detail::strategy_color(sr.strategy);
        svg += "<rect x=\"" + detail::svg_num(lx) + "\" y=\"" + detail::svg_num(ly - 8) +
               "\" width=\"18\" height=\"4\" fill=\"" + color + "\"/>\n";
        svg += "<text x=\"" + detail::svg_num(lx + 24) + "\" y=\"" + detail::svg_num(ly) +
               "\" font-size=\"12\" font-family=\"sans-serif\">" + strategy_name(sr.strategy) +
               "</text>\n";
        ly += 18;
    }

    svg += "</svg>\n";
    write_file_atomic(path, svg);
}

} // namespace antopt
