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

#include "sddestab/families.hpp"
#include "sddestab/problem.hpp"
#include "sddestab/registry.hpp"

using namespace sddestab;

namespace {

InitialSegment one() { return InitialSegment::constant(StateVector{1.0}, 0.0, 0.0); }

ProblemSpec scalar(double a1, double a2, double b1, double b2, DelaySpec delay) {
    ScalarLinearParams p;
    p.a1 = a1;
    p.a2 = {a2};
    p.b1 = b1;
    p.b2 = {b2};
    return make_scalar_linear(p, {delay}, one(), 0.0, 5.0);
}

// custom problem with hand-declared coefficients
ProblemSpec custom(DriftFn f, double alpha, double beta) {
    ProblemSpec spec;
    spec.name = "custom";
    spec.drift = std::move(f);
    spec.diffusion = [](double, std::span<const cplx>, std::span<const cplx>,
                        std::span<cplx> out) { out[0] = 0.0; };
    spec.delays = {DelaySpec::constant(1.0)};
    spec.coeffs.alpha = alpha;
    spec.coeffs.beta = {beta};
    spec.coeffs.gamma1 = 0.0;
    spec.coeffs.gamma2 = {0.0};
    spec.initial = one();
    spec.a = 0.0;
    spec.b = 2.0;
    spec.real_valued = true;
    spec.fit_initial_interval();
    return spec;
}

}  // namespace

TEST_CASE("linear scalar drift meets its declared bounds") {
    const auto spec = scalar(-2.0, 0.5, 0.0, 0.0, DelaySpec::constant(1.0));
    CHECK(spec.coeffs.alpha == -2.0);
    CHECK(spec.coeffs.beta[0] == 0.5);
    CHECK(validate_problem(spec, 1000).passed);
    CHECK(spec.tau_max == 1.0);
    CHECK(spec.initial.lower() == -1.0);
}

TEST_CASE("zero problem passes") {
    CHECK(validate_problem(scalar(0, 0, 0, 0, DelaySpec::constant(1.0)), 1000).passed);
}

TEST_CASE("cubic drift is one-sided Lipschitz with alpha = 1") {
    auto cubic = [](double, std::span<const cplx> x, std::span<const cplx>,
                    std::span<cplx> out) { out[0] = -x[0] * x[0] * x[0]; };
    ProbeOptions opt;
    opt.radius = 2.0;
    CHECK(validate_problem(custom(cubic, 1.0, 0.0), 1000, opt).passed);
}

TEST_CASE("understated coefficients are reported with a witness") {
    auto lin = [](double, std::span<const cplx> x, std::span<const cplx> y,
                  std::span<cplx> out) { out[0] = 3.0 * x[0] + 2.0 * y[0]; };
    const auto report = validate_problem(custom(lin, 1.0, 1.0), 200);
    REQUIRE_FALSE(report.passed);
    REQUIRE(report.violations.size() == 2);
    CHECK(report.violations[0].condition.find("alpha") != std::string::npos);
    CHECK(report.violations[1].condition.find("beta") != std::string::npos);
    CHECK(report.violations[0].lhs > report.violations[0].rhs);
    CHECK(report.violations[0].witness.size() == 4);
    CHECK(report.describe().find("FAIL") != std::string::npos);
}

TEST_CASE("delay window outside the initial interval is reported") {
    auto spec = scalar(-1.0, 0.5, 0.0, 0.0, DelaySpec::constant(1.0));
    spec.tau_max = 0.5;  // too short for tau = 1
    const auto report = validate_problem(spec, 10);
    CHECK_FALSE(report.passed);
    bool window = false;
    for (const auto& v : report.violations)
        window = window || v.condition.find("window") != std::string::npos;
    CHECK(window);
}

TEST_CASE("every registered family passes its own bounds") {
    const DelaySpec delays[] = {DelaySpec::constant(1.0), DelaySpec::pantograph(0.5),
                                DelaySpec::piecewise_constant(0)};
    for (const auto& entry : problem_registry()) {
        ParamMap p;
        if (entry.name == "linear") {
            p["d"] = {2};
            p["A1"] = {-3, 1, -0.5, -2};
            p["A1_im"] = {0, 0.3, 0.2, 0};
            p["A2"] = {0.2, 0.1, 0, 0.3};
            p["B1"] = {0.3, 0, 0.1, 0.2};
            p["B2"] = {0.1, 0, 0, 0.1};
            p["F"] = {1, 0};
        } else if (entry.name == "nonlinear") {
            p["A1"] = {-3};
            p["A2"] = {-1};
            p["A3"] = {0.5};
            p["B1"] = {0.4};
            p["B2"] = {0.3};
        } else {
            p["A1"] = {-4};
            p["A2"] = {1};
            p["B1"] = {0.5};
            p["B2"] = {0.5};
        }
        if (entry.name == "gbm") p.erase("A2"), p.erase("B2");
        for (const auto& delay : delays) {
            const StateVector x0 = entry.name == "linear" ? StateVector{1.0, 0.5} : StateVector{1.0};
            const auto spec = entry.build(p, {delay}, InitialSegment::constant(x0, 0.0, 0.0),
                                          0.0, 4.0);
            const auto report = validate_problem(spec, 1000);
            INFO(entry.name << " " << delay.describe() << " " << report.describe());
            CHECK(report.passed);
        }
    }
}

TEST_CASE("registry rejects malformed parameters") {
    const auto* lin = find_problem("linear");
    REQUIRE(lin != nullptr);
    ParamMap p;
    p["d"] = {2};
    p["A1"] = {1, 2, 3};
    CHECK_THROWS_AS(lin->build(p, {DelaySpec::constant(1.0)},
                               InitialSegment::constant(StateVector{1.0, 1.0}, 0.0, 0.0), 0.0,
                               1.0),
                    ParameterError);
    const auto* nl = find_problem("nonlinear");
    ParamMap q;
    q["A2"] = {1.0};
    CHECK_THROWS_AS(nl->build(q, {DelaySpec::constant(1.0)}, one(), 0.0, 1.0), ParameterError);
    CHECK(find_problem("nope") == nullptr);
}

TEST_CASE("several delays: per-delay coefficients add up") {
    ScalarLinearParams p;
    p.a1 = -5;
    p.a2 = {1.0, -0.5};
    p.b1 = 0.2;
    p.b2 = {0.1, 0.3};
    const auto spec = make_scalar_linear(
        p, {DelaySpec::constant(1.0), DelaySpec::pantograph(0.5)}, one(), 0.0, 3.0);
    CHECK(spec.coeffs.beta_sum() == doctest::Approx(1.5));
    CHECK(spec.coeffs.gamma2_sum() == doctest::Approx(0.4));
    CHECK(validate_problem(spec, 1000).passed);
}
