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

#include <vector>

#include <Eigen/Dense>

#include "sddestab/delay.hpp"
#include "sddestab/initial.hpp"
#include "sddestab/problem.hpp"

namespace sddestab {

// Builtin problem families. Each derives its coefficient set from its
// parameters and fits the initial interval to its delays on [a, b].

/// dx = (A1 x + sum_j A2_j y_j + F) dt + (B1 x + sum_j B2_j y_j + G) dw,
/// scalar Wiener process, complex d x d matrices.
struct LinearParams {
    Eigen::MatrixXcd a1;
    std::vector<Eigen::MatrixXcd> a2;
    Eigen::MatrixXcd b1;
    std::vector<Eigen::MatrixXcd> b2;
    Eigen::VectorXcd f;  // empty means zero
    Eigen::VectorXcd g;
};

ProblemSpec make_linear(const LinearParams& p, std::vector<DelaySpec> delays,
                        InitialSegment initial, double a, double b);

/// Scalar case of the linear family with real coefficients; A2 and B2 carry
/// one entry per delay.
struct ScalarLinearParams {
    double a1 = 0.0;
    std::vector<double> a2{0.0};
    double b1 = 0.0;
    std::vector<double> b2{0.0};
    double f = 0.0;
    double g = 0.0;
};

ProblemSpec make_scalar_linear(const ScalarLinearParams& p, std::vector<DelaySpec> delays,
                               InitialSegment initial, double a, double b);

/// dx = (A1 x + A2 x^3 + sum_j A3_j sqrt(y_j^2 + 1) + F) dt
///      + (B1 sin x + sum_j B2_j arctan y_j + G) dw,   A2 <= 0, real states.
struct NonlinearParams {
    double a1 = 0.0;
    double a2 = -1.0;
    std::vector<double> a3{0.0};
    double b1 = 0.0;
    std::vector<double> b2{0.0};
    double f = 0.0;
    double g = 0.0;
};

ProblemSpec make_nonlinear(const NonlinearParams& p, std::vector<DelaySpec> delays,
                           InitialSegment initial, double a, double b);

/// dx = A1 x dt + B1 x dw without memory. Carried as a one-delay problem
/// whose delayed argument has zero coefficients.
ProblemSpec make_gbm(double a1, double b1, InitialSegment initial, double a, double b);

}  // namespace sddestab
