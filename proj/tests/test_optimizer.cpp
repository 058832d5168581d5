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

#include "antopt/optimizer.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

using namespace antopt;

namespace {

// Smooth unimodal test environment with a known argmax: capacity is a
// wrap-aware Gaussian bump around the target orientation. Noise-free.
class BumpEnvironment final : public Environment {
  public:
    BumpEnvironment(OrientationConfig target, double sigma_rad)
        : target_(std::move(target)), sigma_(sigma_rad),
          scales_(target_.dimension(), sigma_rad) {}

    CapacitySample evaluate(const OrientationConfig &o) override {
        double d = config_distance(o, target_, scales_);
        double c = 8.0 * std::exp(-0.5 * d * d);
        return {o, CapacityValue(c), 1, SnrLinear(1.0), ""};
    }

    SearchDomain domain() const override { return SearchDomain::full(target_.n_antennas()); }
    std::string metadata() const override { return "analytic bump"; }

    const OrientationConfig &target() const { return target_; }

  private:
    OrientationConfig target_;
    double sigma_;
    std::vector<double> scales_;
};

OrientationConfig bump_target() {
    return OrientationConfig::from_degrees({{120.0, 60.0}, {300.0, 100.0}});
}

// Constant environment: every orientation scores the same.
class FlatEnvironment final : public Environment {
  public:
    CapacitySample evaluate(const OrientationConfig &o) override {
        return {o, CapacityValue(1.0), 1, SnrLinear(1.0), ""};
    }
    SearchDomain domain() const override { return SearchDomain::full(2); }
    std::string metadata() const override { return "flat"; }
};

bool traces_equal(const OptimizationTrace &a, const OptimizationTrace &b) {
    if (a.samples.size() != b.samples.size())
        return false;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        if (!(a.samples[i].config == b.samples[i].config))
            return false;
        if (a.samples[i].capacity.bits_per_s_per_hz != b.samples[i].capacity.bits_per_s_per_hz)
            return false;
    }
    return a.best_so_far == b.best_so_far;
}

} // namespace

TEST_CASE("ucb_score arithmetic and edge cases", "[optimizer]") {
    CHECK(ucb_score(0.0, 1.0, 4.0) == Catch::Approx(2.0));
    CHECK(ucb_score(1.0, 0.0, 123.0) == Catch::Approx(1.0));
    CHECK(ucb_score(2.0, 4.0, 1.0) == Catch::Approx(4.0));
    CHECK(ucb_score(1.0, -1e-12, 1.0) == Catch::Approx(1.0)); // tiny negatives clamp
    CHECK_THROWS_AS(ucb_score(0.0, -1e-3, 1.0), std::domain_error);
    CHECK_THROWS_AS(ucb_score(0.0, 1.0, -1.0), std::domain_error);
}

TEST_CASE("propose_next picks the UCB argmax with stable ties", "[optimizer]") {
    GPHyperparams h = GPHyperparams::defaults(4);
    std::vector<OrientationConfig> cands = {
        OrientationConfig::from_degrees({{10, 10}, {10, 10}}),
        OrientationConfig::from_degrees({{200, 90}, {15, 170}}),
        OrientationConfig::from_degrees({{355, 45}, {120, 20}}),
    };

    // single candidate
    std::vector<OrientationConfig> one = {cands[1]};
    CHECK(propose_next(GPModel(h), one, 4.0) == cands[1]);

    // empty model: all scores equal the prior, so index 0 wins
    CHECK(propose_next(GPModel(h), cands, 4.0) == cands[0]);

    // hand-computed oracle on a fitted model
    std::vector<OrientationConfig> xs = {cands[0], cands[1]};
    std::vector<double> ys = {1.0, 3.0};
    GPModel m = gp_fit(xs, ys, h);
    double best_score = -1e300;
    std::size_t best = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        GPPrediction p = m.predict(cands[i]);
        double s = p.mean + 2.0 * std::sqrt(p.variance);
        if (s > best_score) {
            best_score = s;
            best = i;
        }
    }
    CHECK(propose_next(m, cands, 4.0) == cands[best]);

    std::vector<OrientationConfig> none;
    CHECK_THROWS_AS(propose_next(m, none, 4.0), std::domain_error);
}

TEST_CASE("quantize_config snaps to the servo grid", "[optimizer]") {
    auto c = OrientationConfig::from_degrees({{42.4, 17.6}, {359.7, 179.6}});
    auto q = quantize_config(c, 1.0);
    CHECK(rad2deg(q.antenna(0).yaw_rad) == Catch::Approx(42.0).margin(1e-12));
    CHECK(rad2deg(q.antenna(0).roll_rad) == Catch::Approx(18.0).margin(1e-12));
    CHECK(rad2deg(q.antenna(1).yaw_rad) == Catch::Approx(0.0).margin(1e-12)); // 360 wraps
    CHECK(rad2deg(q.antenna(1).roll_rad) == Catch::Approx(180.0).margin(1e-12));
    CHECK_THROWS_AS(quantize_config(c, 0.0), std::domain_error);
}

TEST_CASE("run_optimizer budget boundary equals the warm-up design", "[optimizer]") {
    BumpEnvironment env(bump_target(), 0.9);
    OptimizerParams params;
    params.n_init = 8;
    OptimizationTrace t = run_optimizer(Strategy::kBayesOpt, env, 8, params, 1);
    REQUIRE(t.samples.size() == 8);

    // same points as the raw Sobol design, scaled and quantized
    BumpEnvironment env2(bump_target(), 0.9);
    OptimizationTrace sobol_trace = run_optimizer(Strategy::kSobol, env2, 8, params, 99);
    for (std::size_t i = 0; i < 8; ++i)
        REQUIRE(t.samples[i].config == sobol_trace.samples[i].config);
}

TEST_CASE("run_optimizer rejects bad budgets", "[optimizer]") {
    BumpEnvironment env(bump_target(), 0.9);
    OptimizerParams params;
    CHECK_THROWS_AS(run_optimizer(Strategy::kRandom, env, 0, params, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_optimizer(Strategy::kBayesOpt, env, 4, params, 1), std::invalid_argument);
}

TEST_CASE("random strategy is seed-deterministic and seed-sensitive", "[optimizer]") {
    BumpEnvironment a(bump_target(), 0.9), b(bump_target(), 0.9), c(bump_target(), 0.9);
    OptimizerParams params;
    auto t1 = run_optimizer(Strategy::kRandom, a, 20, params, 7);
    auto t2 = run_optimizer(Strategy::kRandom, b, 20, params, 7);
    auto t3 = run_optimizer(Strategy::kRandom, c, 20, params, 8);
    CHECK(traces_equal(t1, t2));
    CHECK_FALSE(traces_equal(t1, t3));
}

TEST_CASE("sobol strategy is deterministic and seed-independent", "[optimizer]") {
    BumpEnvironment a(bump_target(), 0.9), b(bump_target(), 0.9);
    OptimizerParams params;
    auto t1 = run_optimizer(Strategy::kSobol, a, 20, params, 1);
    auto t2 = run_optimizer(Strategy::kSobol, b, 20, params, 12345);
    CHECK(traces_equal(t1, t2));
}

TEST_CASE("bayesopt depends on its seed through the candidate pools", "[optimizer]") {
    BumpEnvironment a(bump_target(), 0.9), b(bump_target(), 0.9);
    OptimizerParams params;
    params.n_candidates = 512;
    auto t1 = run_optimizer(Strategy::kBayesOpt, a, 14, params, 1);
    auto t2 = run_optimizer(Strategy::kBayesOpt, b, 14, params, 2);
    CHECK_FALSE(traces_equal(t1, t2));

    BumpEnvironment c(bump_target(), 0.9);
    auto t3 = run_optimizer(Strategy::kBayesOpt, c, 14, params, 1);
    CHECK(traces_equal(t1, t3));
}

TEST_CASE("best_so_far is the nondecreasing running maximum", "[optimizer]") {
    OptimizerParams params;
    params.n_candidates = 256;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Strategy strategy = seed % 3 == 0   ? Strategy::kBayesOpt
                            : seed % 3 == 1 ? Strategy::kRandom
                                            : Strategy::kSobol;
        BumpEnvironment env(bump_target(), 0.9);
        auto t = run_optimizer(strategy, env, 12, params, seed);
        REQUIRE(t.samples.size() == 12);
        double running = -1.0;
        for (std::size_t i = 0; i < t.samples.size(); ++i) {
            running = std::max(running, t.samples[i].capacity.bits_per_s_per_hz);
            REQUIRE(t.best_so_far[i] == running);
            REQUIRE(t.samples[i].trial == static_cast<int>(i) + 1);
            if (i > 0)
                REQUIRE(t.best_so_far[i] >= t.best_so_far[i - 1]);
        }
    }
}

TEST_CASE("bayesopt locates the analytic bump argmax", "[optimizer]") {
    const auto target = bump_target();
    int hits = 0;
    OptimizerParams params;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        BumpEnvironment env(target, 0.5);
        auto t = run_optimizer(Strategy::kBayesOpt, env, 40, params, seed);
        const auto &best = t.best_sample().config;
        bool ok = true;
        for (std::size_t d = 0; d < 4; ++d) {
            double diff = best.coord(d) - target.coord(d);
            if (is_yaw_dimension(d))
                diff = wrap_angle_diff(diff);
            ok = ok && std::abs(diff) <= deg2rad(10.0);
        }
        hits += ok ? 1 : 0;
    }
    REQUIRE(hits >= 9);
}

TEST_CASE("ucb argmax is invariant to constant target shifts", "[optimizer]") {
    GPHyperparams h = GPHyperparams::defaults(4);
    std::mt19937_64 rng(77);
    auto u = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    auto rand_cfg = [&]() {
        return OrientationConfig::from_radians(
            {{kTwoPi * u(), kPi * u()}, {kTwoPi * u(), kPi * u()}});
    };
    for (int round = 0; round < 20; ++round) {
        std::vector<OrientationConfig> xs;
        std::vector<double> ys, ys_shift;
        for (int i = 0; i < 6; ++i) {
            xs.push_back(rand_cfg());
            ys.push_back(u() * 5.0);
            ys_shift.push_back(ys.back() + 1000.0);
        }
        std::vector<OrientationConfig> cands;
        for (int i = 0; i < 50; ++i)
            cands.push_back(rand_cfg());
        GPModel m1 = gp_fit(xs, ys, h);
        GPModel m2 = gp_fit(xs, ys_shift, h);
        REQUIRE(propose_next(m1, cands, 4.0) == propose_next(m2, cands, 4.0));
    }
}

TEST_CASE("flat environment keeps every strategy total", "[optimizer]") {
    FlatEnvironment env;
    OptimizerParams params;
    params.n_candidates = 128;
    for (Strategy s : {Strategy::kBayesOpt, Strategy::kRandom, Strategy::kSobol}) {
        auto t = run_optimizer(s, env, 10, params, 3);
        REQUIRE(t.samples.size() == 10);
        for (double b : t.best_so_far)
            REQUIRE(b == 1.0);
    }
}

TEST_CASE("hyperparameter grid search stays deterministic", "[optimizer]") {
    OptimizerParams params;
    params.n_init = 4;
    params.n_candidates = 64;
    params.hyper_search = true;
    BumpEnvironment a(bump_target(), 0.5), b(bump_target(), 0.5);
    auto t1 = run_optimizer(Strategy::kBayesOpt, a, 8, params, 3);
    auto t2 = run_optimizer(Strategy::kBayesOpt, b, 8, params, 3);
    REQUIRE(t1.samples.size() == 8);
    CHECK(traces_equal(t1, t2));
}

TEST_CASE("scalar length scale broadcasts across dimensions", "[optimizer]") {
    OptimizerParams params;
    params.length_scales = {0.7};
    GPHyperparams h = params.gp_hyper(4);
    REQUIRE(h.length_scales == std::vector<double>(4, 0.7));
    params.length_scales = {0.7, 0.7, 0.7};
    CHECK_THROWS_AS(params.gp_hyper(4), std::invalid_argument);
}

TEST_CASE("strategy names round-trip", "[optimizer]") {
    for (Strategy s : {Strategy::kBayesOpt, Strategy::kRandom, Strategy::kSobol})
        CHECK(parse_strategy(strategy_name(s)) == s);
    CHECK_THROWS_AS(parse_strategy("simulated-annealing"), std::invalid_argument);
}
