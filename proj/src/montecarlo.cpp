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

#include "sddestab/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sddestab/families.hpp"

namespace sddestab {

namespace {

template <typename Fn>
void with_path_context(std::size_t path, Fn&& fn) {
    try {
        fn();
    } catch (const StepError& e) {
        std::ostringstream os;
        os << "path " << path << ": " << e.what();
        throw StepError(os.str(), e.residual());
    }
}

}  // namespace

MsDeviationSeries estimate_ms_deviation(const ProblemSpec& problem, const InitialSegment& xi,
                                        const InitialSegment& eta, const Grid& grid,
                                        std::size_t paths, std::uint64_t master_seed,
                                        const MonteCarloOptions& options) {
    if (paths == 0) throw ParameterError("estimate_ms_deviation needs M >= 1 paths");
    {
        // surface stepsize problems before any worker starts
        BackwardEuler probe(problem);
        probe.require_solvable(grid.h());
    }
    const std::size_t nodes = grid.steps() + 1;

    auto sample = [&](std::size_t p, std::span<double> out) {
        with_path_context(p, [&] {
            const WienerPath path =
                WienerPath::generate(master_seed, p, grid, problem.wiener_dimension);
            BackwardEuler stepper(problem);
            Trajectory x(grid, xi);
            Trajectory y(grid, eta);
            stepper.run(x, path);
            stepper.run(y, path);
            for (std::size_t n = 0; n < nodes; ++n) out[n] = squared_distance(x.node(n), y.node(n));
        });
    };
    NodeStatistics stats = ensemble_statistics(paths, nodes, options, sample);

    MsDeviationSeries series;
    series.paths = paths;
    series.seed = master_seed;
    series.h = grid.h();
    series.d0 = sup_squared_distance(xi, eta);
    series.estimate = std::move(stats.mean);
    series.std_error = std::move(stats.std_error);
    series.time.resize(nodes);
    series.envelope.resize(nodes);
    series.violated.assign(nodes, false);

    const double c = contraction_constant(problem.coeffs);
    double c_tilde = std::numeric_limits<double>::infinity();
    if (c > 0.0) {
        try {
            c_tilde = discrete_constants(problem.coeffs, grid.h()).c_tilde;
        } catch (const StepsizeError&) {
            // no certified growth rate at this stepsize
        }
    }
    for (std::size_t n = 0; n < nodes; ++n) {
        series.time[n] = grid.node(n);
        const double elapsed = series.time[n] - grid.a();
        series.envelope[n] = (c > 0.0 && !std::isfinite(c_tilde))
                                 ? std::numeric_limits<double>::infinity()
                                 : discrete_envelope(c, c_tilde, series.d0, elapsed);
    }
    return series;
}

std::vector<double> exact_second_moment_scalar_linear(double a1, double b1, double h,
                                                      std::size_t steps, double x0) {
    const double den = 1.0 - a1 * h;
    if (den == 0.0) throw ParameterError("1 - A1 h must be nonzero");
    const double ratio = (1.0 + b1 * b1 * h) / (den * den);
    std::vector<double> m(steps + 1);
    m[0] = x0 * x0;
    for (std::size_t n = 0; n < steps; ++n) m[n + 1] = m[n] * ratio;
    return m;
}

NodeStatistics estimate_second_moment(const ProblemSpec& problem, const InitialSegment& xi,
                                      const Grid& grid, std::size_t paths,
                                      std::uint64_t master_seed,
                                      const MonteCarloOptions& options) {
    BackwardEuler(problem).require_solvable(grid.h());
    const std::size_t nodes = grid.steps() + 1;
    auto sample = [&](std::size_t p, std::span<double> out) {
        with_path_context(p, [&] {
            const WienerPath path =
                WienerPath::generate(master_seed, p, grid, problem.wiener_dimension);
            BackwardEuler stepper(problem);
            Trajectory x(grid, xi);
            stepper.run(x, path);
            for (std::size_t n = 0; n < nodes; ++n) out[n] = squared_norm(x.node(n));
        });
    };
    return ensemble_statistics(paths, nodes, options, sample);
}

BoundReport check_bound(const MsDeviationSeries& series, double slack_sigmas) {
    BoundReport report;
    report.violated.assign(series.size(), false);
    report.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < series.size(); ++n) {
        const double lower = series.estimate[n] - slack_sigmas * series.std_error[n];
        const double margin = lower - series.envelope[n];
        if (margin > report.worst_margin || n == 0) {
            report.worst_margin = margin;
            report.worst_node = n;
        }
        if (lower > series.envelope[n]) {
            report.violated[n] = true;
            ++report.violations;
        }
    }
    return report;
}

BlockEnvelope asymptotic_envelope(const NodeSequence& seq, double c2, double d0) {
    if (!(c2 < 1.0))
        throw CertificationError("asymptotic envelope needs c2 < 1 (requires c < 0)");
    if (seq.indices.empty() || seq.indices.front() != 0)
        throw ParameterError("node sequence must start at n_0 = 0");
    BlockEnvelope env;
    const std::size_t blocks = seq.indices.size();
    env.per_block.resize(blocks);
    double factor = 1.0;
    for (std::size_t k = 0; k < blocks; ++k) {
        factor *= c2;
        env.per_block[k] = factor * d0;
    }
    env.per_node.resize(seq.steps + 1);
    env.per_node[0] = d0;
    for (std::size_t n = 1; n <= seq.steps; ++n) env.per_node[n] = env.per_block[seq.block_of(n)];
    return env;
}

void apply_envelope(MsDeviationSeries& series, std::span<const double> envelope) {
    if (envelope.size() != series.size())
        throw ParameterError("envelope length differs from the deviation series");
    series.envelope.assign(envelope.begin(), envelope.end());
    series.violated.assign(series.size(), false);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ParameterError("slope needs paired samples");
    if (x.size() < 2) throw ParameterError("slope needs at least two points");
    double sx = 0.0, sy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw ParameterError("log-log slope needs positive values");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw ParameterError("slope needs at least two distinct stepsizes");
    return sxy / sxx;
}

StrongOrderResult strong_error_slope(const StrongOrderSetup& setup, std::span<const double> h_list,
                                     std::size_t paths, std::uint64_t master_seed,
                                     const MonteCarloOptions& options) {
    if (h_list.size() < 2) throw ParameterError("strong order needs at least two stepsizes");
    if (!(setup.horizon > 0.0)) throw ParameterError("strong order horizon must be positive");
    double finest = h_list[0];
    for (double h : h_list) {
        if (!(h > 0.0)) throw ParameterError("stepsizes must be positive");
        finest = std::min(finest, h);
    }
    const auto to_steps = [&](double h) {
        const double n = setup.horizon / h;
        const double rounded = std::round(n);
        if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * rounded)
            throw ParameterError("every stepsize must divide the horizon");
        return static_cast<std::size_t>(rounded);
    };
    const std::size_t fine_steps = to_steps(finest);
    std::vector<std::size_t> factors;
    for (double h : h_list) {
        const std::size_t steps = to_steps(h);
        if (fine_steps % steps != 0)
            throw ParameterError("stepsizes must be nested: each must be a multiple of the finest");
        factors.push_back(fine_steps / steps);
    }

    const Grid fine(0.0, setup.horizon, fine_steps);
    const ProblemSpec problem =
        make_gbm(setup.a1, setup.b1,
                 InitialSegment::constant(StateVector{setup.x0}, 0.0, 0.0), 0.0, setup.horizon);
    std::vector<Grid> grids;
    for (std::size_t f : factors) grids.emplace_back(0.0, setup.horizon, fine_steps / f);
    for (const auto& g : grids) BackwardEuler(problem).require_solvable(g.h());
    const double drift_rate = setup.a1 - 0.5 * setup.b1 * setup.b1;
    const std::size_t levels = h_list.size();

    auto sample = [&](std::size_t p, std::span<double> out) {
        with_path_context(p, [&] {
            const WienerPath path = WienerPath::generate(master_seed, p, fine, 1);
            double w_end = 0.0;
            for (double dw : path.increments()) w_end += dw;
            const double exact =
                setup.x0 * std::exp(drift_rate * setup.horizon + setup.b1 * w_end);
            BackwardEuler stepper(problem);
            for (std::size_t l = 0; l < levels; ++l) {
                Trajectory x(grids[l], problem.initial);
                stepper.run(x, path.coarsened(factors[l]));
                out[l] = std::norm(x.node(grids[l].steps())[0] - exact);
            }
        });
    };
    NodeStatistics stats = ensemble_statistics(paths, levels, options, sample);

    StrongOrderResult result;
    result.h.assign(h_list.begin(), h_list.end());
    result.rms_error.resize(levels);
    for (std::size_t l = 0; l < levels; ++l) result.rms_error[l] = std::sqrt(stats.mean[l]);
    result.slope = log_log_slope(result.h, result.rms_error);
    return result;
}

}  // namespace sddestab
