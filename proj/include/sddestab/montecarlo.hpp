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
#include <span>
#include <vector>

#include "sddestab/analysis.hpp"
#include "sddestab/initial.hpp"
#include "sddestab/integrator.hpp"
#include "sddestab/problem.hpp"

namespace sddestab {

struct MonteCarloOptions {
    // Worker threads; results do not depend on this value.
    std::size_t threads = 1;
    // Paths per reduction chunk. Fixed chunks make the reduction order
    // independent of scheduling.
    std::size_t chunk = 64;
};

/// Per-node mean of |X_n - Y_n|^2 over coupled path pairs.
struct MsDeviationSeries {
    std::vector<double> time;
    std::vector<double> estimate;
    std::vector<double> std_error;  // sample std / sqrt(M)
    std::vector<double> envelope;
    std::vector<bool> violated;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    double h = 0.0;
    double d0 = 0.0;  // sup |xi - eta|^2 over the initial interval

    std::size_t size() const { return estimate.size(); }
};

/// Ensemble statistics of a per-path, per-node sample.
struct NodeStatistics {
    std::vector<double> mean;
    std::vector<double> std_error;
};

// Runs `sample(path_index, out)` for every path in [0, paths), where `out`
// receives one value per node, and reduces in a fixed chunk order.
template <typename Sample>
NodeStatistics ensemble_statistics(std::size_t paths, std::size_t nodes,
                                   const MonteCarloOptions& options, Sample&& sample);

/// Simulates M coupled pairs (xi, eta) sharing their noise and attaches the
/// finite-window envelope: D0 when c <= 0, exp(c~ (t - a)) D0 when c > 0 and
/// the stepsize constants exist, +inf otherwise.
MsDeviationSeries estimate_ms_deviation(const ProblemSpec& problem, const InitialSegment& xi,
                                        const InitialSegment& eta, const Grid& grid,
                                        std::size_t paths, std::uint64_t master_seed,
                                        const MonteCarloOptions& options = {});

/// m_0 = x0^2, m_{n+1} = m_n (1 + B1^2 h) / (1 - A1 h)^2: the exact second
/// moment of backward Euler iterates for dx = A1 x dt + B1 x dw.
std::vector<double> exact_second_moment_scalar_linear(double a1, double b1, double h,
                                                      std::size_t steps, double x0);

/// Mean of |X_n|^2 over independent paths of a single initial segment.
NodeStatistics estimate_second_moment(const ProblemSpec& problem, const InitialSegment& xi,
                                      const Grid& grid, std::size_t paths,
                                      std::uint64_t master_seed,
                                      const MonteCarloOptions& options = {});

struct BoundReport {
    std::size_t violations = 0;
    std::vector<bool> violated;
    // max over nodes of (estimate - slack * stderr - envelope); <= 0 means clean
    double worst_margin = 0.0;
    std::size_t worst_node = 0;
};

/// Flags node n when estimate - slack * stderr > envelope.
BoundReport check_bound(const MsDeviationSeries& series, double slack_sigmas);

struct BlockEnvelope {
    std::vector<double> per_block;  // c2^{k+1} D0
    std::vector<double> per_node;   // node 0 carries D0
};

/// Envelope c2^{k+1} D0 on the nodes (n_k, n_{k+1}]; nodes past the last
/// index stay in the final block. Throws CertificationError when c2 >= 1.
BlockEnvelope asymptotic_envelope(const NodeSequence& seq, double c2, double d0);

// Replaces the envelope column (and clears violation flags).
void apply_envelope(MsDeviationSeries& series, std::span<const double> envelope);

struct StrongOrderSetup {
    double a1 = -1.0;
    double b1 = 0.5;
    double x0 = 1.0;
    double horizon = 1.0;
};

struct StrongOrderResult {
    std::vector<double> h;
    std::vector<double> rms_error;
    double slope = 0.0;
};

/// Endpoint strong error of backward Euler for dx = A1 x dt + B1 x dw against
/// x0 exp((A1 - B1^2/2) T + B1 w(T)), w(T) being the sum of the increments
/// used. Every stepsize must divide the finest one an integer number of
/// times so all levels share one Brownian path per sample.
StrongOrderResult strong_error_slope(const StrongOrderSetup& setup, std::span<const double> h_list,
                                     std::size_t paths, std::uint64_t master_seed,
                                     const MonteCarloOptions& options = {});

// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace sddestab

#include "sddestab/montecarlo_impl.hpp"
