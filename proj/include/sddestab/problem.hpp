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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sddestab/delay.hpp"
#include "sddestab/initial.hpp"
#include "sddestab/types.hpp"

namespace sddestab {

/// Bounds placing a problem in the class SD(alpha, beta, gamma1, gamma2):
///
///   Re<x1 - x2, f(t,x1,y) - f(t,x2,y)> <= alpha |x1 - x2|^2
///   |f(t,x,y1) - f(t,x,y2)|            <= sum_j beta_j |y1_j - y2_j|
///   |g(t,x1,y1) - g(t,x2,y2)|          <= gamma1 |x1 - x2| + sum_j gamma2_j |y1_j - y2_j|
///
/// with one beta_j and gamma2_j per delay.
struct CoefficientSet {
    double alpha = 0.0;
    std::vector<double> beta{0.0};
    double gamma1 = 0.0;
    std::vector<double> gamma2{0.0};

    std::size_t delay_count() const { return beta.size(); }
    double beta_sum() const;
    double gamma2_sum() const;

    // Throws ParameterError on negative, non-finite or mismatched entries.
    void check() const;
};

// Drift: out = f(t, x, y_1..y_r), with the delayed states packed in `delayed`
// as r consecutive blocks of d entries.
using DriftFn = std::function<void(double t, std::span<const cplx> x,
                                   std::span<const cplx> delayed, std::span<cplx> out)>;

// Diffusion: out = g(t, x, y_1..y_r) as a d x m column-major matrix.
using DiffusionFn = std::function<void(double t, std::span<const cplx> x,
                                       std::span<const cplx> delayed, std::span<cplx> out)>;

struct ProblemSpec {
    std::string name;
    std::size_t dimension = 1;
    std::size_t wiener_dimension = 1;
    DriftFn drift;
    DiffusionFn diffusion;
    std::vector<DelaySpec> delays;
    InitialSegment initial;
    CoefficientSet coeffs;
    double a = 0.0;
    double b = 1.0;
    // Length of the initial interval [a - tau_max, a].
    double tau_max = 0.0;
    // Restrict probing to real states (for drifts like sin x that are only
    // Lipschitz on the real line).
    bool real_valued = false;

    std::size_t delay_count() const { return delays.size(); }

    // Sets tau_max to the smallest value covering every delay on [a, b] and
    // rebinds the initial segment to that domain.
    void fit_initial_interval();

    // Structural checks: dimensions, coefficient count, window.
    void check() const;
};

struct Violation {
    std::string condition;
    double lhs = 0.0;
    double rhs = 0.0;
    double t = 0.0;
    std::vector<StateVector> witness;

    std::string describe() const;
};

struct ValidationReport {
    bool passed = true;
    std::size_t probes = 0;
    std::vector<Violation> violations;  // first witness per violated condition

    std::string describe() const;
};

struct ProbeOptions {
    double radius = 3.0;
    std::uint64_t seed = 0x5eedULL;
    // Relative slack for floating-point rounding on each inequality.
    double tolerance = 1e-9;
};

/// Spot-checks the declared coefficient bounds and the delay-window
/// constraint on random samples. Violations are reported, never thrown.
ValidationReport validate_problem(const ProblemSpec& spec, std::size_t probes,
                                  const ProbeOptions& options = {});

}  // namespace sddestab
