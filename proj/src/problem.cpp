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

#include "sddestab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace sddestab {

double CoefficientSet::beta_sum() const {
    double s = 0.0;
    for (double b : beta) s += b;
    return s;
}

double CoefficientSet::gamma2_sum() const {
    double s = 0.0;
    for (double g : gamma2) s += g;
    return s;
}

void CoefficientSet::check() const {
    if (beta.empty()) throw ParameterError("coefficient set needs at least one delay");
    if (beta.size() != gamma2.size())
        throw ParameterError("beta and gamma2 must have one entry per delay");
    if (!std::isfinite(alpha)) throw ParameterError("alpha must be finite");
    if (!std::isfinite(gamma1) || gamma1 < 0.0)
        throw ParameterError("gamma1 must be finite and >= 0");
    for (std::size_t j = 0; j < beta.size(); ++j) {
        if (!std::isfinite(beta[j]) || beta[j] < 0.0)
            throw ParameterError("beta entries must be finite and >= 0");
        if (!std::isfinite(gamma2[j]) || gamma2[j] < 0.0)
            throw ParameterError("gamma2 entries must be finite and >= 0");
    }
}

void ProblemSpec::fit_initial_interval() {
    double tau = 0.0;
    for (const auto& d : delays) tau = std::max(tau, d.required_tau_max(a, b));
    tau_max = tau;
    if (initial.dimension() > 0) initial = initial.rebound(a, tau_max);
}

void ProblemSpec::check() const {
    if (dimension == 0) throw ParameterError("problem dimension must be >= 1");
    if (wiener_dimension == 0) throw ParameterError("Wiener dimension must be >= 1");
    if (!drift || !diffusion) throw ParameterError("problem needs drift and diffusion");
    if (delays.empty()) throw ParameterError("problem needs at least one delay");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw ParameterError("problem window must satisfy a < b");
    coeffs.check();
    if (coeffs.delay_count() != delays.size())
        throw ParameterError("coefficient set must have one beta/gamma2 per delay");
    if (initial.dimension() != dimension)
        throw ParameterError("initial segment dimension differs from the problem dimension");
}

std::string Violation::describe() const {
    std::ostringstream os;
    os.precision(10);
    os << condition << " violated at t=" << t << ": lhs=" << lhs << " > rhs=" << rhs;
    if (!witness.empty()) {
        os << " witness=";
        for (std::size_t k = 0; k < witness.size(); ++k) {
            os << (k ? ", " : "") << "(";
            for (std::size_t i = 0; i < witness[k].size(); ++i) {
                if (i) os << " ";
                os << witness[k][i].real();
                if (witness[k][i].imag() != 0.0) os << (witness[k][i].imag() > 0 ? "+" : "")
                                                    << witness[k][i].imag() << "i";
            }
            os << ")";
        }
    }
    return os.str();
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    os << (passed ? "pass" : "FAIL") << " (" << probes << " probes)";
    for (const auto& v : violations) os << "\n  " << v.describe();
    return os.str();
}

namespace {

class Prober {
  public:
    Prober(const ProblemSpec& spec, const ProbeOptions& opt)
        : spec_(spec), opt_(opt), rng_(opt.seed), box_(-opt.radius, opt.radius),
          unit_(0.0, 1.0) {}

    double time() { return spec_.a + (spec_.b - spec_.a) * unit_(rng_); }

    void fill(std::span<cplx> v) {
        for (auto& z : v) z = spec_.real_valued ? cplx(box_(rng_), 0.0)
                                                : cplx(box_(rng_), box_(rng_));
    }

  private:
    const ProblemSpec& spec_;
    ProbeOptions opt_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> box_;
    std::uniform_real_distribution<double> unit_;
};

bool exceeds(double lhs, double rhs, double tol) {
    return lhs > rhs + tol * (1.0 + std::abs(lhs) + std::abs(rhs));
}

}  // namespace

ValidationReport validate_problem(const ProblemSpec& spec, std::size_t probes,
                                  const ProbeOptions& options) {
    if (probes == 0) throw ParameterError("validate_problem needs at least one probe");
    spec.check();

    const std::size_t d = spec.dimension;
    const std::size_t m = spec.wiener_dimension;
    const std::size_t r = spec.delay_count();
    const auto& k = spec.coeffs;

    ValidationReport report;
    report.probes = probes;
    bool seen[4] = {false, false, false, false};
    auto record = [&](int which, const char* name, double lhs, double rhs, double t,
                      std::vector<StateVector> witness) {
        report.passed = false;
        if (seen[which]) return;
        seen[which] = true;
        report.violations.push_back({name, lhs, rhs, t, std::move(witness)});
    };

    Prober prober(spec, options);
    std::vector<cplx> x1(d), x2(d), y1(r * d), y2(r * d);
    std::vector<cplx> f1(d), f2(d), g1(d * m), g2(d * m), diff(d);

    for (std::size_t p = 0; p < probes; ++p) {
        const double t = prober.time();
        prober.fill(x1);
        prober.fill(x2);
        prober.fill(y1);
        prober.fill(y2);
        auto witness = [&]() {
            std::vector<StateVector> w{StateVector(std::span<const cplx>(x1)),
                                       StateVector(std::span<const cplx>(x2))};
            for (std::size_t j = 0; j < r; ++j)
                w.emplace_back(std::span<const cplx>(y1).subspan(j * d, d));
            for (std::size_t j = 0; j < r; ++j)
                w.emplace_back(std::span<const cplx>(y2).subspan(j * d, d));
            return w;
        };

        // one-sided Lipschitz in the present state
        spec.drift(t, x1, y1, f1);
        spec.drift(t, x2, y1, f2);
        for (std::size_t i = 0; i < d; ++i) {
            diff[i] = x1[i] - x2[i];
            f2[i] = f1[i] - f2[i];
        }
        {
            double lhs = real_inner(diff, f2);
            double rhs = k.alpha * squared_norm(diff);
            if (exceeds(lhs, rhs, options.tolerance))
                record(0, "one-sided Lipschitz (alpha)", lhs, rhs, t, witness());
        }

        // Lipschitz in the delayed arguments
        spec.drift(t, x1, y1, f1);
        spec.drift(t, x1, y2, f2);
        {
            double lhs = std::sqrt(squared_distance(f1, f2));
            double rhs = 0.0;
            for (std::size_t j = 0; j < r; ++j)
                rhs += k.beta[j] * std::sqrt(squared_distance(
                                       std::span<const cplx>(y1).subspan(j * d, d),
                                       std::span<const cplx>(y2).subspan(j * d, d)));
            if (exceeds(lhs, rhs, options.tolerance))
                record(1, "delayed Lipschitz (beta)", lhs, rhs, t, witness());
        }

        // diffusion, Frobenius norm
        spec.diffusion(t, x1, y1, g1);
        spec.diffusion(t, x2, y2, g2);
        {
            double lhs = std::sqrt(squared_distance(g1, g2));
            double rhs = k.gamma1 * std::sqrt(squared_distance(x1, x2));
            for (std::size_t j = 0; j < r; ++j)
                rhs += k.gamma2[j] * std::sqrt(squared_distance(
                                         std::span<const cplx>(y1).subspan(j * d, d),
                                         std::span<const cplx>(y2).subspan(j * d, d)));
            if (exceeds(lhs, rhs, options.tolerance))
                record(2, "diffusion Lipschitz (gamma1, gamma2)", lhs, rhs, t, witness());
        }

        // delay window: a - tau_max <= t - tau(t) <= t
        const double tt = (p == 0) ? spec.a : (p == 1 ? spec.b : t);
        for (const auto& delay : spec.delays) {
            const double s = delay.delayed_time(tt);
            const double slack = 1e-12 * (1.0 + std::abs(tt));
            if (s > tt + slack)
                record(3, "delay window (t - tau(t) <= t)", s, tt, tt, {});
            else if (s < spec.a - spec.tau_max - slack)
                record(3, "delay window (t - tau(t) >= a - tau_max)", spec.a - spec.tau_max, s,
                       tt, {});
        }
    }
    return report;
}

}  // namespace sddestab
