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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sddestab/initial.hpp"
#include "sddestab/problem.hpp"
#include "sddestab/types.hpp"

namespace sddestab {

/// Uniform partition t_i = a + i h of [a, b], h = (b - a)/N.
class Grid {
  public:
    Grid(double a, double b, std::size_t steps);

    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t steps() const { return steps_; }
    double h() const { return h_; }
    // t_N is returned as b exactly.
    double node(std::size_t i) const {
        return i == steps_ ? b_ : a_ + static_cast<double>(i) * h_;
    }

  private:
    double a_, b_;
    std::size_t steps_;
    double h_;
};

/// N x m Brownian increments, each N(0, h), derived from (master seed, path
/// index) through a Philox stream and the inverse normal CDF.
class WienerPath {
  public:
    WienerPath() = default;

    static WienerPath generate(std::uint64_t master_seed, std::uint64_t path_index,
                               const Grid& grid, std::size_t wiener_dim);

    // Wrap given increments (row n holds the m components of step n).
    static WienerPath from_increments(std::vector<double> increments, std::size_t steps,
                                      std::size_t wiener_dim);

    std::size_t steps() const { return steps_; }
    std::size_t wiener_dimension() const { return dim_; }
    std::span<const double> step(std::size_t n) const {
        return std::span<const double>(increments_).subspan(n * dim_, dim_);
    }
    const std::vector<double>& increments() const { return increments_; }

    // Sum of `factor` consecutive steps; models the same path on a grid that
    // is `factor` times coarser.
    WienerPath coarsened(std::size_t factor) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t path_index() const { return path_; }

  private:
    std::vector<double> increments_;
    std::size_t steps_ = 0;
    std::size_t dim_ = 0;
    std::uint64_t seed_ = 0;
    std::uint64_t path_ = 0;
};

// Standard normal draw number `index` of stream (seed, path).
double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t index);

/// Node values X_0..X_n of one realisation plus the initial segment, with
/// piecewise linear dense output between nodes.
class Trajectory {
  public:
    Trajectory(const Grid& grid, InitialSegment initial);

    const Grid& grid() const { return grid_; }
    std::size_t dimension() const { return dim_; }
    // Index of the latest computed node.
    std::size_t latest() const { return latest_; }
    const InitialSegment& initial() const { return initial_; }

    std::span<const cplx> node(std::size_t i) const {
        return std::span<const cplx>(states_).subspan(i * dim_, dim_);
    }
    StateVector state(std::size_t i) const { return StateVector(node(i)); }

    StateVector operator()(double t) const;
    void interpolate_into(double t, std::span<cplx> out) const;

    // Appends X_{latest+1}.
    void push(std::span<const cplx> x);
    // Forget every node after the first (keeps X_0 = xi(a)).
    void reset();

  private:
    Grid grid_;
    InitialSegment initial_;
    std::size_t dim_;
    std::size_t latest_ = 0;
    std::vector<cplx> states_;
};

StateVector interpolate(const Trajectory& traj, double t);

struct SolverOptions {
    double tolerance = 1e-12;        // residual <= tolerance (1 + |z|)
    std::size_t max_iterations = 200;
    double switch_ratio = 0.5;       // fixed point -> Newton above this contraction
    double fd_scale = 1e-7;          // finite-difference step (1 + |z|) * fd_scale
};

struct StepResult {
    StateVector value;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool newton = false;
};

/// Backward Euler for dx = f dt + g dw on a delay equation:
///
///   X_{n+1} = X_n + h f(t_{n+1}, X_{n+1}, X^h(t_{n+1} - tau(t_{n+1})))
///                 + g(t_n, X_n, X^h(t_n - tau(t_n))) dw_n
///
/// A delayed time inside (t_n, t_{n+1}] makes the delayed argument
/// l X_{n+1} + (1 - l) X_n, which stays part of the unknown.
class BackwardEuler {
  public:
    explicit BackwardEuler(const ProblemSpec& problem, SolverOptions options = {});

    const ProblemSpec& problem() const { return problem_; }

    // Throws StepsizeError unless (alpha + sum beta) h < 1.
    void require_solvable(double h) const;

    /// Solves for X_{n+1} given X_0..X_n stored in `traj`.
    StepResult solve(const Trajectory& traj, std::span<const double> dw,
                     std::optional<std::span<const cplx>> guess = std::nullopt);

    // Advances `traj` over the whole grid using `path`.
    void run(Trajectory& traj, const WienerPath& path);

  private:
    // out = z - h f(t_{n+1}, z, l z + b0) - rhs
    void residual(std::span<const cplx> z, std::span<cplx> out);
    void fixed_point_map(std::span<const cplx> z, std::span<cplx> out);
    void prepare(const Trajectory& traj, std::span<const double> dw);
    bool newton(std::span<cplx> z, double& res, std::size_t& iterations);

    const ProblemSpec& problem_;
    SolverOptions options_;
    std::size_t d_, m_, r_;
    double h_ = 0.0;
    double t_next_ = 0.0;
    std::vector<double> weight_;  // l per delay, 0 when fully in the past
    std::vector<cplx> known_;     // b0 per delay
    std::vector<cplx> delayed_;
    std::vector<cplx> rhs_;
    std::vector<cplx> g_;
    std::vector<cplx> f_;
    std::vector<cplx> z_, z_next_, trial_, start_, best_;
};

StepResult solve_implicit(const ProblemSpec& problem, const Trajectory& traj,
                          std::span<const double> dw,
                          std::optional<std::span<const cplx>> guess = std::nullopt,
                          const SolverOptions& options = {});

Trajectory simulate(const ProblemSpec& problem, const Grid& grid, const WienerPath& path);
Trajectory simulate(const ProblemSpec& problem, const InitialSegment& initial,
                    const Grid& grid, const WienerPath& path);

/// Two solutions from different initial segments driven by the same noise.
std::pair<Trajectory, Trajectory> simulate_pair(const ProblemSpec& problem,
                                                const InitialSegment& xi,
                                                const InitialSegment& eta, const Grid& grid,
                                                const WienerPath& path);

}  // namespace sddestab
