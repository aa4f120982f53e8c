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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sddestab/delay.hpp"
#include "sddestab/problem.hpp"

namespace sddestab {

// Several delays aggregate conservatively: sums of beta_j and gamma2_j take
// the place of the single-delay values.

/// c = 2 alpha + 2 sum beta + (gamma1 + sum gamma2)^2.
double contraction_constant(const CoefficientSet& k);

struct SigmaRho {
    double sigma = 0.0;  // 2 alpha + beta + gamma1 gamma2 + gamma1^2
    double rho = 0.0;    // beta + gamma1 gamma2 + gamma2^2
};

SigmaRho sigma_rho(const CoefficientSet& k);

struct AsymptoticCertificate {
    double alpha0 = 0.0;
    std::optional<double> nu;  // empty when alpha0 >= 0
    bool ok = false;           // alpha0 < 0 and nu < 1

    // nu + (1 - nu) exp(alpha0 mu). Requires nu.
    double c_mu(double mu) const;
};

AsymptoticCertificate asymptotic_certificate(const CoefficientSet& k);

struct DiscreteConstants {
    double h = 0.0;
    // (1 + h(g1 + g2)^2) / (1 - 2h alpha - 2h beta)
    double first_ratio = 0.0;
    // (1 + h beta + h(g1 + g2)^2) / (1 - 2h alpha - h beta)
    double second_ratio = 0.0;
    double c1 = 0.0;       // max of the two ratios
    double c_tilde = 0.0;  // c1 / h
    double c2 = 0.0;       // same max; below 1 exactly when c < 0
    bool solvable = false; // (alpha + beta) h < 1
};

/// Throws StepsizeError when h <= 0 or a denominator is not positive.
DiscreteConstants discrete_constants(const CoefficientSet& k, double h);

inline constexpr double kSolvabilityMargin = 1e-6;

/// Largest admissible stepsize: unconstrained for c <= 0 apart from the
/// solvability cap (1 - 1e-6)/(alpha + beta); c0/c otherwise.
double max_stepsize(const CoefficientSet& k, double c0);

// exp(c (t - a)) D0 when c > 0, D0 otherwise.
double analytic_envelope(double c, double d0, double elapsed);
// exp(c_tilde (t_n - a)) D0 when c > 0, D0 otherwise.
double discrete_envelope(double c, double c_tilde, double d0, double elapsed);

struct NodeSequence {
    std::vector<std::size_t> indices;
    double a = 0.0;
    double h = 0.0;
    std::size_t steps = 0;  // N

    // Block k holds the nodes (indices[k], indices[k+1]]; the last block runs
    // to N. Returns the block of node n >= 1.
    std::size_t block_of(std::size_t n) const;
};

/// Indices 0 = n_0 < n_1 < ... such that every grid time t >= t_{n_{k+1}}
/// satisfies t - tau(t) >= t_{n_k + 1} for all delays. Stops after K+1
/// indices or at the end of the grid.
NodeSequence node_sequence(std::span<const DelaySpec> delays, double a, double h,
                           std::size_t steps, std::size_t count);
NodeSequence node_sequence(const DelaySpec& delay, double a, double h, std::size_t steps,
                           std::size_t count);

/// Coefficients of dx = (A1 x + sum A2_j y_j + F) dt + (B1 x + sum B2_j y_j + G) dw.
CoefficientSet linear_coeffs(const Eigen::MatrixXcd& a1, std::span<const Eigen::MatrixXcd> a2,
                             const Eigen::MatrixXcd& b1, std::span<const Eigen::MatrixXcd> b2);

/// Re A1 + |A2| + (|B1| + |B2|)^2 / 2 < 0.
bool scalar_linear_criterion(cplx a1, cplx a2, cplx b1, cplx b2);

enum class Classification {
    StableInMeanSquare,
    Contractive,
    AsymptoticallyContractive,
    Uncertified
};

const char* to_string(Classification c);

struct StabilityCertificate {
    double c = 0.0;
    SigmaRho sr;
    AsymptoticCertificate asymptotic;
    double mu = 1.0;
    std::optional<double> c_mu;
    double c0 = 0.5;
    double h_max = 0.0;
    std::vector<Classification> classes;
    std::vector<DiscreteConstants> steps;
    // Stepsizes whose constants could not be formed (non-positive denominator).
    std::vector<std::pair<double, std::string>> rejected_steps;

    bool has(Classification c) const;
    std::string classification() const;
};

/// Bundles every constant above. `delays` decide whether the asymptotic claim
/// applies (t - tau(t) must diverge in closed form).
StabilityCertificate certify(const CoefficientSet& k, std::span<const DelaySpec> delays,
                             double c0, double mu, std::span<const double> steps);

}  // namespace sddestab
