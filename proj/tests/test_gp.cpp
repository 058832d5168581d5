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

#include "antopt/gp.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace antopt;

namespace {

OrientationConfig cfg1(double yaw, double roll) {
    return OrientationConfig::from_radians({{yaw, roll}});
}

std::vector<OrientationConfig> random_configs(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto u = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    std::vector<OrientationConfig> out;
    for (int i = 0; i < n; ++i)
        out.push_back(OrientationConfig::from_radians(
            {{kTwoPi * u(), kPi * u()}, {kTwoPi * u(), kPi * u()}}));
    return out;
}

// Dense oracle: mean/variance via an explicit inverse of K + sigma^2 I,
// no Cholesky anywhere.
GPPrediction dense_predict(const std::vector<OrientationConfig> &xs, const std::vector<double> &ys,
                           const GPHyperparams &hyper, const OrientationConfig &x) {
    const int n = static_cast<int>(xs.size());
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i)
        y(i) = ys[i];
    double mean = y.mean();
    double scale = std::sqrt((y.array() - mean).square().sum() / n);
    if (scale <= 0.0)
        scale = 1.0;
    Eigen::VectorXd ystd = (y.array() - mean) / scale;

    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            k(i, j) = se_kernel(xs[i], xs[j], hyper);
    k.diagonal().array() += hyper.noise_variance + hyper.jitter;
    Eigen::MatrixXd kinv = k.fullPivLu().inverse();

    Eigen::VectorXd ks(n);
    for (int i = 0; i < n; ++i)
        ks(i) = se_kernel(x, xs[i], hyper);
    double m_std = ks.dot(kinv * ystd);
    double v_std = hyper.signal_variance - ks.dot(kinv * ks);
    return {mean + scale * m_std, scale * scale * std::max(0.0, v_std)};
}

} // namespace

TEST_CASE("se_kernel basics", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(2);
    auto a = cfg1(1.0, 2.0);
    CHECK(se_kernel(a, a, h) == h.signal_variance);

    // wrap consistency: (350, 10) and (10, 30) are both 20 degrees apart
    auto p1 = OrientationConfig::from_degrees({{350.0, 0.0}});
    auto p2 = OrientationConfig::from_degrees({{10.0, 0.0}});
    auto q1 = OrientationConfig::from_degrees({{10.0, 0.0}});
    auto q2 = OrientationConfig::from_degrees({{30.0, 0.0}});
    CHECK(se_kernel(p1, p2, h) == Catch::Approx(se_kernel(q1, q2, h)).margin(1e-15));
}

TEST_CASE("se_kernel far tail bound in 4-D", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(4);
    h.length_scales = {0.1, 0.1, 0.1, 0.1};
    auto a = OrientationConfig::from_radians({{0.0, 0.0}, {0.0, 0.0}});
    auto b = OrientationConfig::from_radians({{kPi, kPi / 2}, {kPi, kPi / 2}});
    REQUIRE(config_distance(a, b, h.length_scales) >= 10.0);
    CHECK(se_kernel(a, b, h) < h.signal_variance * 2e-22);
}

TEST_CASE("gp_fit single point has the closed-form factor", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(2);
    h.signal_variance = 1.0;
    h.noise_variance = 0.01;
    h.jitter = 0.0;
    std::vector<OrientationConfig> xs = {cfg1(1.0, 1.0)};
    std::vector<double> ys = {3.7};
    GPModel m = gp_fit(xs, ys, h);
    REQUIRE(m.chol_factor().rows() == 1);
    CHECK(m.chol_factor()(0, 0) == Catch::Approx(std::sqrt(1.01)).margin(1e-15));
}

TEST_CASE("gp_fit tolerates duplicate inputs through noise", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(2);
    h.noise_variance = 0.1;
    std::vector<OrientationConfig> xs = {cfg1(1.0, 1.0), cfg1(1.0, 1.0)};
    std::vector<double> ys = {1.0, 2.0};
    GPModel m = gp_fit(xs, ys, h);

    // 2x2 direct solve oracle: K = [[1,1],[1,1]] + 0.1 I on standardized
    // targets (-1, +1); posterior mean at the duplicate halves the gap.
    GPPrediction p = m.predict(cfg1(1.0, 1.0));
    GPPrediction want = dense_predict(xs, ys, h, cfg1(1.0, 1.0));
    CHECK(p.mean == Catch::Approx(want.mean).margin(1e-10));
    CHECK(p.variance == Catch::Approx(want.variance).margin(1e-10));
}

TEST_CASE("gp weights equal the dense inverse solve", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(4);
    auto xs = random_configs(5, 17);
    std::vector<double> ys = {1.2, -0.7, 3.4, 0.0, 2.2};
    GPModel m = gp_fit(xs, ys, h);

    Eigen::VectorXd y(5);
    for (int i = 0; i < 5; ++i)
        y(i) = ys[i];
    double mean = y.mean();
    double scale = std::sqrt((y.array() - mean).square().sum() / 5.0);
    Eigen::VectorXd ystd = (y.array() - mean) / scale;
    Eigen::MatrixXd k(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            k(i, j) = se_kernel(xs[i], xs[j], h);
    k.diagonal().array() += h.noise_variance + h.jitter;
    Eigen::VectorXd alpha = k.fullPivLu().solve(ystd);
    for (int i = 0; i < 5; ++i)
        REQUIRE(m.weights()(i) == Catch::Approx(alpha(i)).margin(1e-8));
}

TEST_CASE("gp_predict prior on the empty model", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(2);
    h.signal_variance = 2.5;
    GPModel empty(h);
    GPPrediction p = gp_predict(empty, cfg1(1.0, 1.0));
    CHECK(p.mean == 0.0);
    CHECK(p.variance == 2.5);
}

TEST_CASE("gp_predict interpolates with tiny noise", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(4);
    h.noise_variance = 1e-10;
    h.jitter = 1e-12;
    auto xs = random_configs(6, 23);
    std::vector<double> ys = {5.0, 6.5, 4.2, 7.7, 5.5, 6.1};
    GPModel m = gp_fit(xs, ys, h);
    for (int i = 0; i < 6; ++i)
        REQUIRE(m.predict(xs[i]).mean == Catch::Approx(ys[i]).margin(1e-6));
}

TEST_CASE("gp 3-point 1-D posterior matches the direct formula", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(2);
    std::vector<OrientationConfig> xs = {cfg1(0.5, 0.3), cfg1(1.5, 0.3), cfg1(2.5, 0.3)};
    std::vector<double> ys = {1.0, 2.0, 1.5};
    GPModel m = gp_fit(xs, ys, h);
    for (double yaw : {0.2, 0.9, 1.7, 3.0, 5.5}) {
        auto x = cfg1(yaw, 0.3);
        GPPrediction got = m.predict(x);
        GPPrediction want = dense_predict(xs, ys, h, x);
        REQUIRE(got.mean == Catch::Approx(want.mean).margin(1e-8));
        REQUIRE(got.variance == Catch::Approx(want.variance).margin(1e-8));
    }
}

TEST_CASE("gp posterior variance at training points is bounded by noise", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(4);
    auto xs = random_configs(12, 37);
    std::vector<double> ys;
    std::mt19937_64 rng(38);
    for (int i = 0; i < 12; ++i)
        ys.push_back((rng() >> 11) * 0x1.0p-53 * 10.0);
    GPModel m = gp_fit(xs, ys, h);
    for (const auto &x : xs) {
        GPPrediction p = m.predict_standardized(x);
        REQUIRE(p.variance >= 0.0);
        REQUIRE(p.variance <= h.noise_variance + h.jitter + 1e-8);
    }
}

TEST_CASE("gp kernel matrix is symmetric with scaled unit diagonal", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(4);
    h.signal_variance = 3.0;
    auto xs = random_configs(8, 55);
    for (const auto &a : xs) {
        CHECK(se_kernel(a, a, h) == 3.0);
        for (const auto &b : xs)
            CHECK(se_kernel(a, b, h) == Catch::Approx(se_kernel(b, a, h)).margin(1e-15));
    }
}

TEST_CASE("gp_fit escalates jitter and reports conditioning failure", "[gp]") {
    // Degenerate kernel scale: every factorization attempt produces
    // non-positive pivots, so escalation runs out and reports the failure.
    GPHyperparams h = GPHyperparams::defaults(2);
    h.signal_variance = std::numeric_limits<double>::infinity();
    h.noise_variance = 0.0;
    h.jitter = 1e-8;
    std::vector<OrientationConfig> xs = {cfg1(1.0, 1.0), cfg1(1.0, 1.0)};
    std::vector<double> ys = {1.0, 2.0};
    CHECK_THROWS_AS(gp_fit(xs, ys, h), std::runtime_error);

    // Duplicates with zero noise and zero jitter succeed via escalation.
    GPHyperparams h2 = GPHyperparams::defaults(2);
    h2.noise_variance = 0.0;
    h2.jitter = 0.0;
    GPModel m = gp_fit(xs, ys, h2);
    CHECK(m.effective_jitter() > 0.0);
}

TEST_CASE("gp_fit validates inputs", "[gp]") {
    GPHyperparams h = GPHyperparams::defaults(2);
    std::vector<OrientationConfig> xs = {cfg1(1.0, 1.0)};
    std::vector<double> ys = {1.0, 2.0};
    CHECK_THROWS_AS(gp_fit(xs, ys, h), std::invalid_argument);
    std::vector<double> bad = {std::nan("")};
    CHECK_THROWS_AS(gp_fit(xs, bad, h), std::invalid_argument);
    GPHyperparams wrongdim = GPHyperparams::defaults(4);
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS(gp_fit(xs, one, wrongdim), std::invalid_argument);
}

TEST_CASE("gp log marginal likelihood prefers sane length scales", "[gp]") {
    // Data drawn from a smooth function of yaw; absurdly short scales
    // should not win the marginal likelihood comparison.
    std::vector<OrientationConfig> xs;
    std::vector<double> ys;
    for (int i = 0; i < 10; ++i) {
        double yaw = 0.6 * i;
        xs.push_back(cfg1(yaw, 1.0));
        ys.push_back(std::sin(yaw));
    }
    GPHyperparams good = GPHyperparams::defaults(2);
    good.length_scales = {1.0, 1.0};
    GPHyperparams bad = good;
    bad.length_scales = {0.01, 0.01};
    CHECK(gp_fit(xs, ys, good).log_marginal_likelihood() >
          gp_fit(xs, ys, bad).log_marginal_likelihood());
}
