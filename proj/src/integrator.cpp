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

#include "sddestab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/special_functions/erf.hpp>

#include "sddestab/philox.hpp"

namespace sddestab {

Grid::Grid(double a, double b, std::size_t steps) : a_(a), b_(b), steps_(steps) {
    if (steps == 0) throw ParameterError("grid needs N >= 1 steps");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw ParameterError("grid needs finite a < b");
    h_ = (b - a) / static_cast<double>(steps);
}

// --- noise -----------------------------------------------------------------

namespace {

// 53-bit uniform strictly inside (0, 1).
double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double normal_quantile(double u) {
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

}  // namespace

double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t index) {
    const auto block = index >> 1;
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block),
                                  static_cast<std::uint32_t>(block >> 32),
                                  static_cast<std::uint32_t>(path),
                                  static_cast<std::uint32_t>(path >> 32)};
    const auto out = Philox4x32::apply(ctr, Philox4x32::key_from_seed(seed));
    const double u = (index & 1) ? to_open_unit(out[2], out[3]) : to_open_unit(out[0], out[1]);
    return normal_quantile(u);
}

WienerPath WienerPath::generate(std::uint64_t master_seed, std::uint64_t path_index,
                                const Grid& grid, std::size_t wiener_dim) {
    if (wiener_dim == 0) throw ParameterError("Wiener dimension must be >= 1");
    WienerPath p;
    p.steps_ = grid.steps();
    p.dim_ = wiener_dim;
    p.seed_ = master_seed;
    p.path_ = path_index;
    const std::size_t count = p.steps_ * p.dim_;
    p.increments_.resize(count);
    const double sd = std::sqrt(grid.h());
    const auto key = Philox4x32::key_from_seed(master_seed);
    for (std::size_t block = 0; 2 * block < count; ++block) {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block),
                                      static_cast<std::uint32_t>(std::uint64_t(block) >> 32),
                                      static_cast<std::uint32_t>(path_index),
                                      static_cast<std::uint32_t>(path_index >> 32)};
        const auto out = Philox4x32::apply(ctr, key);
        p.increments_[2 * block] = sd * normal_quantile(to_open_unit(out[0], out[1]));
        if (2 * block + 1 < count)
            p.increments_[2 * block + 1] = sd * normal_quantile(to_open_unit(out[2], out[3]));
    }
    return p;
}

WienerPath WienerPath::from_increments(std::vector<double> increments, std::size_t steps,
                                       std::size_t wiener_dim) {
    if (wiener_dim == 0 || increments.size() != steps * wiener_dim)
        throw ParameterError("increment array must hold steps x wiener_dim values");
    WienerPath p;
    p.increments_ = std::move(increments);
    p.steps_ = steps;
    p.dim_ = wiener_dim;
    return p;
}

WienerPath WienerPath::coarsened(std::size_t factor) const {
    if (factor == 0 || steps_ % factor != 0)
        throw ParameterError("coarsening factor must divide the number of steps");
    WienerPath p;
    p.steps_ = steps_ / factor;
    p.dim_ = dim_;
    p.seed_ = seed_;
    p.path_ = path_;
    p.increments_.assign(p.steps_ * dim_, 0.0);
    for (std::size_t n = 0; n < steps_; ++n)
        for (std::size_t k = 0; k < dim_; ++k)
            p.increments_[(n / factor) * dim_ + k] += increments_[n * dim_ + k];
    return p;
}

// --- trajectory ------------------------------------------------------------

Trajectory::Trajectory(const Grid& grid, InitialSegment initial)
    : grid_(grid), initial_(std::move(initial)), dim_(initial_.dimension()) {
    if (dim_ == 0) throw ParameterError("trajectory needs a nonempty initial segment");
    if (initial_.upper() != grid.a())
        throw ParameterError("initial segment must end at the grid start a");
    states_.reserve((grid.steps() + 1) * dim_);
    states_.resize(dim_);
    initial_.eval_into(grid.a(), states_);
}

void Trajectory::reset() {
    latest_ = 0;
    states_.resize(dim_);
}

void Trajectory::push(std::span<const cplx> x) {
    if (x.size() != dim_) throw ParameterError("state dimension mismatch");
    if (latest_ >= grid_.steps()) throw ParameterError("trajectory already complete");
    states_.insert(states_.end(), x.begin(), x.end());
    ++latest_;
}

StateVector Trajectory::operator()(double t) const {
    StateVector out(dim_);
    interpolate_into(t, out.span());
    return out;
}

void Trajectory::interpolate_into(double t, std::span<cplx> out) const {
    const double a = grid_.a();
    const double h = grid_.h();
    if (t <= a) {
        const double lower = initial_.lower();
        const double slack = 1e-12 * (1.0 + std::abs(t));
        if (t >= lower) {
            initial_.eval_into(t, out);
        } else if (t >= lower - slack) {
            initial_.eval_into(lower, out);
        } else if (initial_.tau_max() == 0.0 && t >= a - h) {
            // zero-length initial interval: extend xi(a) constantly over one step
            initial_.eval_into(a, out);
        } else {
            std::ostringstream os;
            os << "time " << t << " precedes the initial interval [" << lower << ", " << a
               << "]";
            throw DomainError(os.str());
        }
        return;
    }
    const double last = grid_.node(latest_);
    if (t >= last) {
        if (t > last + 1e-12 * (1.0 + std::abs(last))) {
            std::ostringstream os;
            os << "time " << t << " lies beyond the latest computed node t=" << last;
            throw DomainError(os.str());
        }
        auto x = node(latest_);
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    auto i = static_cast<std::size_t>(std::floor((t - a) / h));
    i = std::min(i, latest_ - 1);
    if (t == grid_.node(i + 1)) {
        auto x = node(i + 1);
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    const double ti = grid_.node(i);
    double w = std::clamp((t - ti) / h, 0.0, 1.0);
    auto xi = node(i);
    if (t == ti || w == 0.0) {
        std::copy(xi.begin(), xi.end(), out.begin());
        return;
    }
    auto xn = node(i + 1);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = (1.0 - w) * xi[k] + w * xn[k];
}

StateVector interpolate(const Trajectory& traj, double t) { return traj(t); }

// --- backward Euler --------------------------------------------------------

BackwardEuler::BackwardEuler(const ProblemSpec& problem, SolverOptions options)
    : problem_(problem), options_(options), d_(problem.dimension),
      m_(problem.wiener_dimension), r_(problem.delay_count()) {
    problem_.check();
    weight_.resize(r_);
    known_.resize(r_ * d_);
    delayed_.resize(r_ * d_);
    rhs_.resize(d_);
    g_.resize(d_ * m_);
    f_.resize(d_);
    z_.resize(d_);
    z_next_.resize(d_);
    trial_.resize(d_);
    start_.resize(d_);
    best_.resize(d_);
}

void BackwardEuler::require_solvable(double h) const {
    const double growth = (problem_.coeffs.alpha + problem_.coeffs.beta_sum()) * h;
    if (!(growth < 1.0)) {
        std::ostringstream os;
        os << "stepsize h=" << h
           << " violates the unique-solvability condition (alpha + beta) h < 1: (alpha + beta) h = "
           << growth;
        throw StepsizeError(os.str());
    }
}

void BackwardEuler::prepare(const Trajectory& traj, std::span<const double> dw) {
    const Grid& grid = traj.grid();
    const std::size_t n = traj.latest();
    if (n >= grid.steps()) throw ParameterError("trajectory already complete");
    if (dw.size() != m_) throw ParameterError("Wiener increment has the wrong dimension");
    h_ = grid.h();
    const double tn = grid.node(n);
    t_next_ = grid.node(n + 1);
    auto xn = traj.node(n);

    // explicit diffusion part, history strictly known
    for (std::size_t j = 0; j < r_; ++j) {
        const double s = std::min(problem_.delays[j].delayed_time(tn), tn);
        traj.interpolate_into(s, std::span<cplx>(delayed_).subspan(j * d_, d_));
    }
    problem_.diffusion(tn, xn, delayed_, g_);
    for (std::size_t i = 0; i < d_; ++i) {
        cplx acc = xn[i];
        for (std::size_t k = 0; k < m_; ++k) acc += g_[k * d_ + i] * dw[k];
        rhs_[i] = acc;
    }

    // implicit drift part
    for (std::size_t j = 0; j < r_; ++j) {
        const double s = std::min(problem_.delays[j].delayed_time(t_next_), t_next_);
        auto block = std::span<cplx>(known_).subspan(j * d_, d_);
        if (s <= tn) {
            weight_[j] = 0.0;
            traj.interpolate_into(s, block);
        } else {
            const double l = std::min((s - tn) / h_, 1.0);
            weight_[j] = l;
            for (std::size_t i = 0; i < d_; ++i) block[i] = (1.0 - l) * xn[i];
        }
    }
}

void BackwardEuler::fixed_point_map(std::span<const cplx> z, std::span<cplx> out) {
    for (std::size_t j = 0; j < r_; ++j) {
        const double l = weight_[j];
        for (std::size_t i = 0; i < d_; ++i)
            delayed_[j * d_ + i] = l == 0.0 ? known_[j * d_ + i] : l * z[i] + known_[j * d_ + i];
    }
    problem_.drift(t_next_, z, delayed_, f_);
    for (std::size_t i = 0; i < d_; ++i) out[i] = h_ * f_[i] + rhs_[i];
}

void BackwardEuler::residual(std::span<const cplx> z, std::span<cplx> out) {
    fixed_point_map(z, out);
    for (std::size_t i = 0; i < d_; ++i) out[i] = z[i] - out[i];
}

namespace {

bool all_finite(std::span<const cplx> v) {
    for (const auto& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

}  // namespace

bool BackwardEuler::newton(std::span<cplx> z, double& res, std::size_t& iterations) {
    const std::size_t nr = 2 * d_;
    Eigen::MatrixXd jac(nr, nr);
    Eigen::VectorXd rvec(nr);
    std::vector<cplx> fz(d_), fp(d_), step(d_);

    residual(z, fz);
    res = norm(fz);
    while (iterations < options_.max_iterations) {
        if (!all_finite(fz)) return false;
        if (res <= options_.tolerance * (1.0 + norm(z))) return true;
        ++iterations;

        const double eps = options_.fd_scale * (1.0 + norm(z));
        for (std::size_t k = 0; k < nr; ++k) {
            std::copy(z.begin(), z.end(), trial_.begin());
            trial_[k / 2] += (k % 2 == 0) ? cplx(eps, 0.0) : cplx(0.0, eps);
            residual(trial_, fp);
            for (std::size_t i = 0; i < d_; ++i) {
                jac(2 * i, k) = (fp[i].real() - fz[i].real()) / eps;
                jac(2 * i + 1, k) = (fp[i].imag() - fz[i].imag()) / eps;
            }
        }
        for (std::size_t i = 0; i < d_; ++i) {
            rvec(2 * i) = fz[i].real();
            rvec(2 * i + 1) = fz[i].imag();
        }
        const Eigen::VectorXd delta = jac.partialPivLu().solve(-rvec);
        if (!delta.allFinite()) return false;
        for (std::size_t i = 0; i < d_; ++i) step[i] = cplx(delta(2 * i), delta(2 * i + 1));

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            for (std::size_t i = 0; i < d_; ++i) trial_[i] = z[i] + lambda * step[i];
            residual(trial_, fp);
            const double trial_res = norm(fp);
            if (all_finite(fp) && trial_res < res) {
                std::copy(trial_.begin(), trial_.end(), z.begin());
                std::swap(fz, fp);
                res = trial_res;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) return res <= options_.tolerance * (1.0 + norm(z));
    }
    return res <= options_.tolerance * (1.0 + norm(z));
}

StepResult BackwardEuler::solve(const Trajectory& traj, std::span<const double> dw,
                                std::optional<std::span<const cplx>> guess) {
    require_solvable(traj.grid().h());
    prepare(traj, dw);
    auto xn = traj.node(traj.latest());
    if (guess) {
        if (guess->size() != d_) throw ParameterError("starting guess has the wrong dimension");
        std::copy(guess->begin(), guess->end(), z_.begin());
    } else {
        std::copy(xn.begin(), xn.end(), z_.begin());
    }
    std::copy(z_.begin(), z_.end(), start_.begin());
    std::copy(z_.begin(), z_.end(), best_.begin());
    double best_res = std::numeric_limits<double>::infinity();
    double prev = std::numeric_limits<double>::infinity();

    StepResult result;
    std::size_t it = 0;
    while (it < options_.max_iterations) {
        fixed_point_map(z_, z_next_);
        ++it;
        double res = 0.0;
        for (std::size_t i = 0; i < d_; ++i) res += std::norm(z_[i] - z_next_[i]);
        res = std::sqrt(res);
        if (!std::isfinite(res)) break;
        if (res < best_res) {
            best_res = res;
            std::copy(z_.begin(), z_.end(), best_.begin());
        }
        if (res <= options_.tolerance * (1.0 + norm(z_))) {
            // polish while the map still contracts; z_next_ is the newest iterate
            for (int extra = 0; extra < 3 && res > 0.0; ++extra) {
                std::swap(z_, z_next_);
                fixed_point_map(z_, z_next_);
                ++it;
                double next = 0.0;
                for (std::size_t i = 0; i < d_; ++i) next += std::norm(z_[i] - z_next_[i]);
                next = std::sqrt(next);
                if (!(next < res)) break;
                res = next;
            }
            result.value = StateVector(std::span<const cplx>(z_next_));
            result.residual = res;
            result.iterations = it;
            return result;
        }
        // too slow or diverging: hand over to Newton
        if (res > options_.switch_ratio * prev) break;
        prev = res;
        std::swap(z_, z_next_);
    }

    // Newton from the best fixed-point iterate (or the start when none was finite).
    std::span<cplx> z(z_);
    if (std::isfinite(best_res))
        std::copy(best_.begin(), best_.end(), z.begin());
    else
        std::copy(start_.begin(), start_.end(), z.begin());
    double res = 0.0;
    const bool ok = newton(z, res, it);
    if (!ok) {
        std::ostringstream os;
        os << "implicit step " << traj.latest() << " -> " << traj.latest() + 1
           << " did not converge after " << it << " iterations (residual " << res << ")";
        throw StepError(os.str(), res);
    }
    result.value = StateVector(std::span<const cplx>(z_));
    result.residual = res;
    result.iterations = it;
    result.newton = true;
    return result;
}

void BackwardEuler::run(Trajectory& traj, const WienerPath& path) {
    const Grid& grid = traj.grid();
    if (path.steps() != grid.steps())
        throw ParameterError("Wiener path and grid have different step counts");
    if (path.wiener_dimension() != m_)
        throw ParameterError("Wiener path dimension differs from the problem");
    if (traj.dimension() != d_) throw ParameterError("trajectory dimension differs from the problem");
    require_solvable(grid.h());
    traj.reset();
    for (std::size_t n = 0; n < grid.steps(); ++n) {
        StepResult step = solve(traj, path.step(n));
        if (!step.value.finite()) {
            std::ostringstream os;
            os << "non-finite state at node " << n + 1;
            throw StepError(os.str(), step.residual);
        }
        traj.push(step.value.span());
    }
}

StepResult solve_implicit(const ProblemSpec& problem, const Trajectory& traj,
                          std::span<const double> dw,
                          std::optional<std::span<const cplx>> guess,
                          const SolverOptions& options) {
    BackwardEuler stepper(problem, options);
    return stepper.solve(traj, dw, guess);
}

Trajectory simulate(const ProblemSpec& problem, const InitialSegment& initial,
                    const Grid& grid, const WienerPath& path) {
    if (std::abs(grid.a() - problem.a) > 1e-12 * (1.0 + std::abs(problem.a)))
        throw ParameterError("grid must start at the problem's initial time a");
    Trajectory traj(grid, initial);
    BackwardEuler stepper(problem);
    stepper.run(traj, path);
    return traj;
}

Trajectory simulate(const ProblemSpec& problem, const Grid& grid, const WienerPath& path) {
    return simulate(problem, problem.initial, grid, path);
}

std::pair<Trajectory, Trajectory> simulate_pair(const ProblemSpec& problem,
                                                const InitialSegment& xi,
                                                const InitialSegment& eta, const Grid& grid,
                                                const WienerPath& path) {
    return {simulate(problem, xi, grid, path), simulate(problem, eta, grid, path)};
}

}  // namespace sddestab
