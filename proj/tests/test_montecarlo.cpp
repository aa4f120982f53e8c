/*
   Copyright 2026 The sddestab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <cmath>
#include <random>

#include "sddestab/families.hpp"
#include "sddestab/montecarlo.hpp"

using namespace sddestab;

namespace {

InitialSegment constant(double v, double tau = 0.0) {
    return InitialSegment::constant(StateVector{v}, 0.0, tau);
}

ProblemSpec scalar(double a1, double a2, double b1, double b2, DelaySpec delay, double b) {
    ScalarLinearParams p;
    p.a1 = a1;
    p.a2 = {a2};
    p.b1 = b1;
    p.b2 = {b2};
    return make_scalar_linear(p, {delay}, constant(1.0), 0.0, b);
}

const ProblemSpec kContractive = scalar(-4.0, 1.0, 0.5, 0.5, DelaySpec::constant(1.0), 5.0);

}  // namespace

TEST_CASE("identical initial data give an all-zero series") {
    const Grid g(0.0, 5.0, 50);
    const auto xi = constant(1.0, 1.0);
    const auto s = estimate_ms_deviation(kContractive, xi, xi, g, 300, 4);
    REQUIRE(s.size() == 51);
    for (std::size_t n = 0; n < s.size(); ++n) {
        CHECK(s.estimate[n] == 0.0);
        CHECK(s.std_error[n] == 0.0);
    }
    CHECK(s.d0 == 0.0);
}

TEST_CASE("deterministic problem with one path") {
    const auto det = scalar(-1.0, 0.0, 0.0, 0.0, DelaySpec::constant(1.0), 1.0);
    const Grid g(0.0, 1.0, 10);
    const auto s =
        estimate_ms_deviation(det, constant(1.0, 1.0), constant(0.5, 1.0), g, 1, 0);
    double diff = 0.5;
    for (std::size_t n = 0; n <= 10; ++n) {
        CHECK(s.estimate[n] == doctest::Approx(diff * diff).epsilon(1e-12));
        CHECK(s.std_error[n] == 0.0);
        diff /= 1.1;
    }
}

TEST_CASE("one multiplicative noise step matches its expectation") {
    const double b1 = 0.8, h = 0.25;
    const auto mult = make_gbm(0.0, b1, constant(1.0), 0.0, h);
    const Grid g(0.0, h, 1);
    const auto s = estimate_ms_deviation(mult, constant(1.0), constant(0.5), g, 100000, 99);
    const double exact = 0.25 * (1.0 + b1 * b1 * h);
    CHECK(std::abs(s.estimate[1] - exact) <= 3.0 * s.std_error[1]);
}

TEST_CASE("exact second-moment recursion") {
    const auto m = exact_second_moment_scalar_linear(-2.0, 1.0, 0.1, 3, 1.0);
    CHECK(m[1] == doctest::Approx(1.1 / 1.44).epsilon(1e-14));
    CHECK(m[3] == doctest::Approx(std::pow(1.1 / 1.44, 3)).epsilon(1e-14));
    const auto d = exact_second_moment_scalar_linear(-1.0, 0.0, 0.1, 1, 1.0);
    CHECK(d[1] == doctest::Approx(1.0 / 1.21).epsilon(1e-14));
    for (double v : exact_second_moment_scalar_linear(0.0, 0.0, 0.3, 5, 2.0)) CHECK(v == 4.0);
}

TEST_CASE("Monte Carlo second moment agrees with the recursion") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int set = 0; set < 10; ++set) {
        const double a1 = -3.0 * u(rng) + 0.5;
        const double b1 = 1.5 * u(rng);
        const double h = 0.05 + 0.15 * u(rng);
        const std::size_t steps = 10;
        if (1.0 - a1 * h <= 0.0) continue;
        const auto gbm = make_gbm(a1, b1, constant(1.0), 0.0, h * steps);
        const Grid g(0.0, h * steps, steps);
        const auto stats = estimate_second_moment(gbm, gbm.initial, g, 100000,
                                                  static_cast<std::uint64_t>(1000 + set));
        const auto exact = exact_second_moment_scalar_linear(a1, b1, g.h(), steps, 1.0);
        for (std::size_t n = 0; n <= steps; ++n) {
            INFO("set " << set << " node " << n);
            CHECK(std::abs(stats.mean[n] - exact[n]) <= 3.0 * stats.std_error[n] + 1e-14);
        }
    }
}

TEST_CASE("bound checks") {
    MsDeviationSeries s;
    s.time = {0.0, 1.0, 2.0};
    s.estimate = {0.0, 0.30, 0.27};
    s.std_error = {0.0, 0.01, 0.01};
    s.envelope = {0.25, 0.25, 0.25};
    s.violated.assign(3, false);
    const auto r = check_bound(s, 3.0);
    CHECK(r.violations == 1);
    CHECK(r.violated[1]);
    CHECK_FALSE(r.violated[2]);
    CHECK(r.worst_node == 1);
    CHECK(r.worst_margin == doctest::Approx(0.02));

    s.estimate = {0.0, 0.0, 0.0};
    CHECK(check_bound(s, 3.0).violations == 0);
}

TEST_CASE("asymptotic envelope") {
    const auto seq = node_sequence(DelaySpec::constant(1.0), 0.0, 0.1, 50, 50);
    const double c2 = 12.0 / 17.0;
    const auto env = asymptotic_envelope(seq, c2, 0.25);
    CHECK(env.per_block[0] == doctest::Approx(0.1764705882352941));
    CHECK(env.per_node[0] == 0.25);
    CHECK(env.per_node[11] == env.per_block[0]);
    CHECK(env.per_node[12] == env.per_block[1]);
    CHECK(env.per_node[50] == env.per_block[4]);

    const auto zero = asymptotic_envelope(seq, c2, 0.0);
    for (double v : zero.per_node) CHECK(v == 0.0);

    const auto half = asymptotic_envelope(seq, 0.5, 1.0);
    CHECK(half.per_block[3] == 0.0625);
    CHECK_THROWS_AS(asymptotic_envelope(seq, 1.0, 1.0), CertificationError);
}

TEST_CASE("results do not depend on the number of workers") {
    const Grid g(0.0, 5.0, 50);
    const auto xi = constant(1.0, 1.0), eta = constant(0.5, 1.0);
    MonteCarloOptions one;
    const auto ref = estimate_ms_deviation(kContractive, xi, eta, g, 1000, 12, one);
    for (std::size_t threads : {2u, 3u, 8u}) {
        MonteCarloOptions opt;
        opt.threads = threads;
        const auto s = estimate_ms_deviation(kContractive, xi, eta, g, 1000, 12, opt);
        CHECK(s.estimate == ref.estimate);
        CHECK(s.std_error == ref.std_error);
    }
    const auto again = estimate_ms_deviation(kContractive, xi, eta, g, 1000, 12, one);
    CHECK(again.estimate == ref.estimate);
}

TEST_CASE("doubling the ensemble stays within six standard errors") {
    const Grid g(0.0, 5.0, 50);
    const auto xi = constant(1.0, 1.0), eta = constant(0.5, 1.0);
    const auto a = estimate_ms_deviation(kContractive, xi, eta, g, 2000, 5);
    const auto b = estimate_ms_deviation(kContractive, xi, eta, g, 4000, 5);
    for (std::size_t n = 0; n < a.size(); ++n)
        CHECK(std::abs(a.estimate[n] - b.estimate[n]) <= 6.0 * a.std_error[n] + 1e-15);
}

TEST_CASE("contractive families stay under their envelope") {
    std::vector<ProblemSpec> problems;
    problems.push_back(kContractive);
    NonlinearParams np;
    np.a1 = -3.0;
    np.a2 = -1.0;
    np.a3 = {0.5};
    np.b1 = 0.5;
    np.b2 = {0.5};
    problems.push_back(make_nonlinear(np, {DelaySpec::pantograph(0.5)}, constant(1.0), 0.0, 5.0));
    LinearParams lp;
    lp.a1 = Eigen::MatrixXcd(2, 2);
    lp.a1 << cplx(-3, 1), cplx(0.5, 0), cplx(0, 0.5), cplx(-4, 0);
    lp.a2 = {Eigen::MatrixXcd::Identity(2, 2) * 0.5};
    lp.b1 = Eigen::MatrixXcd::Identity(2, 2) * 0.3;
    lp.b2 = {Eigen::MatrixXcd::Identity(2, 2) * 0.2};
    problems.push_back(make_linear(lp, {DelaySpec::piecewise_constant(0)},
                                   InitialSegment::constant(StateVector{1.0, 1.0}, 0.0, 0.0),
                                   0.0, 5.0));
    const Grid g(0.0, 5.0, 50);
    for (const auto& prob : problems) {
        REQUIRE(contraction_constant(prob.coeffs) < 0.0);
        const std::size_t d = prob.dimension;
        const auto xi = InitialSegment::constant(StateVector(std::vector<cplx>(d, 1.0)), 0.0,
                                                 prob.tau_max);
        const auto eta = InitialSegment::constant(StateVector(std::vector<cplx>(d, -0.5)), 0.0,
                                                  prob.tau_max);
        const auto s = estimate_ms_deviation(prob, xi, eta, g, 10000, 31);
        INFO(prob.name);
        CHECK(check_bound(s, 3.0).violations == 0);
    }
}

TEST_CASE("unsolvable stepsize is rejected before any path") {
    const auto grow = scalar(1.0, 0.5, 0.0, 0.0, DelaySpec::constant(1.0), 5.0);
    const Grid g(0.0, 5.0, 5);
    CHECK_THROWS_AS(estimate_ms_deviation(grow, grow.initial, grow.initial, g, 10, 0),
                    StepsizeError);
}

TEST_CASE("slope fitting") {
    const double h[] = {0.1, 0.05, 0.025};
    const double e[] = {0.2, 0.1, 0.05};
    CHECK(log_log_slope(h, e) == doctest::Approx(1.0));
    const double one[] = {0.1};
    CHECK_THROWS_AS(log_log_slope(std::span<const double>(one), std::span<const double>(one)),
                    ParameterError);
    CHECK_THROWS_AS(strong_error_slope({}, std::span<const double>(one), 10, 0), ParameterError);
    const double not_nested[] = {0.25, 0.2};
    CHECK_THROWS_AS(strong_error_slope({}, not_nested, 10, 0), ParameterError);
}

TEST_CASE("worker errors surface deterministically") {
    MonteCarloOptions opt;
    opt.threads = 4;
    opt.chunk = 8;
    auto sample = [](std::size_t p, std::span<double> out) {
        if (p == 20 || p == 90) throw StepError("path " + std::to_string(p), 1.0);
        out[0] = 1.0;
    };
    CHECK_THROWS_WITH(ensemble_statistics(128, 1, opt, sample), "path 20");
}
