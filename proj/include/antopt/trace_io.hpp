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
//
// CSI trace files: recorded per-orientation channel measurements for
// offline replay.
//
//   line 1:  csi-trace,v1,M=<int>,NR=<int>,NT=<int>,SNR_DB=<float>
//   rows:    yaw1_deg,roll1_deg,yaw2_deg,roll2_deg,k,rx,tx,re,im
//
// One row per (orientation, subcarrier, rx, tx) with 0-based indices, rows
// grouped by orientation, angles in degrees.

#pragma once

#include "antopt/environment.hpp"
#include "antopt/io.hpp"

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace antopt {

class TraceParseError : public std::runtime_error {
  public:
    enum class Kind { kMissingFile, kBadHeader, kBadRow, kDuplicateOrientation, kShapeMismatch };

    TraceParseError(Kind kind, std::size_t line, const std::string &msg)
        : std::runtime_error("trace parse error at line " + std::to_string(line) + ": " + msg),
          kind_(kind), line_(line) {}

    Kind kind() const { return kind_; }
    std::size_t line() const { return line_; }

  private:
    Kind kind_;
    std::size_t line_;
};

// Recorded grid of (orientation, raw CSI) pairs plus the trace's declared
// reference SNR.
struct CsiTrace {
    struct Entry {
        OrientationConfig orientation;
        CsiTensor csi;
    };

    std::vector<Entry> grid;
    SnrLinear snr = SnrLinear(1.0);
    std::string source;

    void validate() const {
        if (grid.empty())
            throw std::invalid_argument("CsiTrace: empty grid");
        const CsiTensor &first = grid.front().csi;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto &e = grid[i];
            if (e.csi.n_subcarriers != first.n_subcarriers || e.csi.n_rx != first.n_rx ||
                e.csi.n_tx != first.n_tx)
                throw std::invalid_argument("CsiTrace: tensor shape mismatch");
            if (!e.csi.all_finite())
                throw std::invalid_argument("CsiTrace: non-finite CSI");
            for (std::size_t j = i + 1; j < grid.size(); ++j)
                if (grid[j].orientation == e.orientation)
                    throw std::invalid_argument("CsiTrace: duplicate orientation");
        }
    }
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.push_back("");
    return out;
}

inline double parse_num(const std::string &s, std::size_t line, const char *what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception &) {
        throw TraceParseError(TraceParseError::Kind::kBadRow, line,
                              std::string("cannot parse ") + what + " from '" + s + "'");
    }
}

inline int parse_int(const std::string &s, std::size_t line, const char *what) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw TraceParseError(TraceParseError::Kind::kBadRow, line,
                              std::string("cannot parse ") + what + " from '" + s + "'");
    return v;
}

} // namespace detail

inline void write_trace(const CsiTrace &trace, const std::filesystem::path &path) {
    trace.validate();
    const CsiTensor &first = trace.grid.front().csi;
    std::string out;
    out += "csi-trace,v1,M=" + std::to_string(first.n_subcarriers) +
           ",NR=" + std::to_string(first.n_rx) + ",NT=" + std::to_string(first.n_tx) +
           ",SNR_DB=" + format_double(trace.snr.db()) + "\n";
    for (const auto &entry : trace.grid) {
        if (entry.orientation.n_antennas() != 2)
            throw std::invalid_argument("write_trace: format carries exactly 2 antennas");
        std::string angles;
        for (const auto &a : entry.orientation.antennas()) {
            angles += format_double(rad2deg(a.yaw_rad));
            angles += ',';
            angles += format_double(rad2deg(a.roll_rad));
            angles += ',';
        }
        for (int k = 0; k < first.n_subcarriers; ++k)
            for (int rx = 0; rx < first.n_rx; ++rx)
                for (int tx = 0; tx < first.n_tx; ++tx) {
                    const auto &h = entry.csi.at(k, rx, tx);
                    out += angles + std::to_string(k) + ',' + std::to_string(rx) + ',' +
                           std::to_string(tx) + ',' + format_double(h.real()) + ',' +
                           format_double(h.imag()) + '\n';
                }
    }
    write_file_atomic(path, out);
}

inline CsiTrace load_trace(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path))
        throw TraceParseError(TraceParseError::Kind::kMissingFile, 0,
                              "no such file: " + path.string());
    std::istringstream in(read_file(path));

    std::string line;
    if (!std::getline(in, line))
        throw TraceParseError(TraceParseError::Kind::kBadHeader, 1, "empty file");
    auto header = detail::split_csv(line);
    if (header.size() != 6 || header[0] != "csi-trace" || header[1] != "v1" ||
        header[2].rfind("M=", 0) != 0 || header[3].rfind("NR=", 0) != 0 ||
        header[4].rfind("NT=", 0) != 0 || header[5].rfind("SNR_DB=", 0) != 0)
        throw TraceParseError(TraceParseError::Kind::kBadHeader, 1,
                              "expected 'csi-trace,v1,M=..,NR=..,NT=..,SNR_DB=..'");
    const int m = detail::parse_int(header[2].substr(2), 1, "M");
    const int n_rx = detail::parse_int(header[3].substr(3), 1, "NR");
    const int n_tx = detail::parse_int(header[4].substr(3), 1, "NT");
    const double snr_db = detail::parse_num(header[5].substr(7), 1, "SNR_DB");
    if (m < 1 || n_rx < 1 || n_tx < 1)
        throw TraceParseError(TraceParseError::Kind::kBadHeader, 1, "nonpositive dimensions");

    CsiTrace trace;
    trace.snr = SnrLinear::from_db(snr_db);
    trace.source = path.string();

    struct Group {
        std::array<double, 4> angles_deg;
        OrientationConfig orientation;
        CsiTensor csi;
        std::vector<bool> seen;
        std::size_t remaining;
        std::size_t start_line;
    };
    std::unique_ptr<Group> open;
    const std::size_t cells = static_cast<std::size_t>(m) * n_rx * n_tx;

    auto close_group = [&](std::size_t at_line) {
        if (!open)
            return;
        if (open->remaining != 0)
            throw TraceParseError(TraceParseError::Kind::kShapeMismatch, at_line,
                                  "orientation block starting at line " +
                                      std::to_string(open->start_line) + " has " +
                                      std::to_string(cells - open->remaining) + " of " +
                                      std::to_string(cells) + " entries");
        trace.grid.push_back({std::move(open->orientation), std::move(open->csi)});
        open.reset();
    };

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto fields = detail::split_csv(line);
        if (fields.size() != 9)
            throw TraceParseError(TraceParseError::Kind::kBadRow, line_no,
                                  "expected 9 columns, got " + std::to_string(fields.size()));
        std::array<double, 4> angles = {
            detail::parse_num(fields[0], line_no, "yaw1_deg"),
            detail::parse_num(fields[1], line_no, "roll1_deg"),
            detail::parse_num(fields[2], line_no, "yaw2_deg"),
            detail::parse_num(fields[3], line_no, "roll2_deg"),
        };
        int k = detail::parse_int(fields[4], line_no, "k");
        int rx = detail::parse_int(fields[5], line_no, "rx");
        int tx = detail::parse_int(fields[6], line_no, "tx");
        double re = detail::parse_num(fields[7], line_no, "re");
        double im = detail::parse_num(fields[8], line_no, "im");
        if (k < 0 || k >= m || rx < 0 || rx >= n_rx || tx < 0 || tx >= n_tx)
            throw TraceParseError(TraceParseError::Kind::kShapeMismatch, line_no,
                                  "index (k,rx,tx) outside declared dimensions");

        if (open && open->angles_deg != angles)
            close_group(line_no);
        if (!open) {
            open = std::make_unique<Group>();
            open->angles_deg = angles;
            open->orientation = OrientationConfig::from_degrees(
                {{angles[0], angles[1]}, {angles[2], angles[3]}});
            for (const auto &e : trace.grid)
                if (e.orientation == open->orientation)
                    throw TraceParseError(TraceParseError::Kind::kDuplicateOrientation, line_no,
                                          "orientation repeats an earlier block");
            open->csi = CsiTensor::zeros(m, n_rx, n_tx);
            open->seen.assign(cells, false);
            open->remaining = cells;
            open->start_line = line_no;
        }
        std::size_t cell = (static_cast<std::size_t>(k) * n_rx + rx) * n_tx + tx;
        if (open->seen[cell])
            throw TraceParseError(TraceParseError::Kind::kShapeMismatch, line_no,
                                  "duplicate (k,rx,tx) cell within orientation block");
        open->seen[cell] = true;
        --open->remaining;
        open->csi.at(k, rx, tx) = {re, im};
    }
    close_group(line_no + 1);

    if (trace.grid.empty())
        throw TraceParseError(TraceParseError::Kind::kShapeMismatch, line_no, "no data rows");
    trace.validate();
    return trace;
}

// Offline replay backend: evaluates at the recorded grid point nearest to
// the query (wrap-aware, unit length scales) and never interpolates CSI.
class TraceEnvironment final : public Environment {
  public:
    explicit TraceEnvironment(CsiTrace trace) : trace_(std::move(trace)) {
        trace_.validate();
        unit_scales_.assign(trace_.grid.front().orientation.dimension(), 1.0);
    }

    CapacitySample evaluate(const OrientationConfig &orientation) override {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < trace_.grid.size(); ++i) {
            double d = config_distance(orientation, trace_.grid[i].orientation, unit_scales_);
            if (d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        const auto &entry = trace_.grid[best];
        return {entry.orientation, capacity_from_raw_csi(entry.csi, trace_.snr), 1,
                effective_snr(entry.csi, trace_.snr), ""};
    }

    SearchDomain domain() const override {
        return SearchDomain::full(trace_.grid.front().orientation.n_antennas());
    }

    std::string metadata() const override {
        return "trace replay: " + trace_.source + ", " + std::to_string(trace_.grid.size()) +
               " orientations, SNR " + format_double(trace_.snr.db()) + " dB";
    }

    const CsiTrace &trace() const { return trace_; }

  private:
    CsiTrace trace_;
    std::vector<double> unit_scales_;
};

inline std::unique_ptr<TraceEnvironment> trace_env(CsiTrace trace) {
    return std::make_unique<TraceEnvironment>(std::move(trace));
}

} // namespace antopt
