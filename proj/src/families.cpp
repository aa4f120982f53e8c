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

#include "sddestab/families.hpp"

#include <cmath>
#include <memory>

#include "sddestab/analysis.hpp"

namespace sddestab {

namespace {

void finish(ProblemSpec& spec, InitialSegment initial) {
    spec.initial = std::move(initial);
    spec.fit_initial_interval();
    spec.check();
}

}  // namespace

ProblemSpec make_linear(const LinearParams& p, std::vector<DelaySpec> delays,
                        InitialSegment initial, double a, double b) {
    const auto d = static_cast<std::size_t>(p.a1.rows());
    if (delays.size() != p.a2.size())
        throw ParameterError("linear family needs one A2/B2 matrix per delay");

    ProblemSpec spec;
    spec.name = "linear";
    spec.dimension = d;
    spec.wiener_dimension = 1;
    spec.coeffs = linear_coeffs(p.a1, p.a2, p.b1, p.b2);
    spec.delays = std::move(delays);
    spec.a = a;
    spec.b = b;

    auto params = std::make_shared<LinearParams>(p);
    const auto n = static_cast<Eigen::Index>(d);
    if (params->f.size() == 0) params->f = Eigen::VectorXcd::Zero(n);
    if (params->g.size() == 0) params->g = Eigen::VectorXcd::Zero(n);
    if (params->f.size() != n || params->g.size() != n)
        throw ParameterError("F and G must have d entries");

    auto affine = [params, d](const Eigen::MatrixXcd& m1, const std::vector<Eigen::MatrixXcd>& m2,
                              const Eigen::VectorXcd& shift, std::span<const cplx> x,
                              std::span<const cplx> delayed, std::span<cplx> out) {
        const auto n = static_cast<Eigen::Index>(d);
        Eigen::Map<const Eigen::VectorXcd> xv(x.data(), n);
        Eigen::Map<Eigen::VectorXcd> ov(out.data(), n);
        ov = m1 * xv + shift;
        for (std::size_t j = 0; j < m2.size(); ++j) {
            Eigen::Map<const Eigen::VectorXcd> yv(delayed.data() + j * d, n);
            ov += m2[j] * yv;
        }
    };
    spec.drift = [params, affine](double, std::span<const cplx> x, std::span<const cplx> y,
                                  std::span<cplx> out) {
        affine(params->a1, params->a2, params->f, x, y, out);
    };
    spec.diffusion = [params, affine](double, std::span<const cplx> x, std::span<const cplx> y,
                                      std::span<cplx> out) {
        affine(params->b1, params->b2, params->g, x, y, out);
    };
    finish(spec, std::move(initial));
    return spec;
}

ProblemSpec make_scalar_linear(const ScalarLinearParams& p, std::vector<DelaySpec> delays,
                               InitialSegment initial, double a, double b) {
    const std::size_t r = delays.size();
    if (p.a2.size() != r || p.b2.size() != r)
        throw ParameterError("scalar_linear needs one A2 and one B2 per delay");

    ProblemSpec spec;
    spec.name = "scalar_linear";
    spec.dimension = 1;
    spec.wiener_dimension = 1;
    spec.coeffs.alpha = p.a1;
    spec.coeffs.gamma1 = std::abs(p.b1);
    spec.coeffs.beta.clear();
    spec.coeffs.gamma2.clear();
    for (std::size_t j = 0; j < r; ++j) {
        spec.coeffs.beta.push_back(std::abs(p.a2[j]));
        spec.coeffs.gamma2.push_back(std::abs(p.b2[j]));
    }
    spec.delays = std::move(delays);
    spec.a = a;
    spec.b = b;

    spec.drift = [p](double, std::span<const cplx> x, std::span<const cplx> y,
                     std::span<cplx> out) {
        cplx acc = p.a1 * x[0] + p.f;
        for (std::size_t j = 0; j < p.a2.size(); ++j) acc += p.a2[j] * y[j];
        out[0] = acc;
    };
    spec.diffusion = [p](double, std::span<const cplx> x, std::span<const cplx> y,
                         std::span<cplx> out) {
        cplx acc = p.b1 * x[0] + p.g;
        for (std::size_t j = 0; j < p.b2.size(); ++j) acc += p.b2[j] * y[j];
        out[0] = acc;
    };
    finish(spec, std::move(initial));
    return spec;
}

ProblemSpec make_nonlinear(const NonlinearParams& p, std::vector<DelaySpec> delays,
                           InitialSegment initial, double a, double b) {
    const std::size_t r = delays.size();
    if (p.a3.size() != r || p.b2.size() != r)
        throw ParameterError("nonlinear family needs one A3 and one B2 per delay");
    if (p.a2 > 0.0) throw ParameterError("nonlinear family requires A2 <= 0");

    ProblemSpec spec;
    spec.name = "nonlinear";
    spec.dimension = 1;
    spec.wiener_dimension = 1;
    spec.real_valued = true;
    spec.coeffs.alpha = p.a1;
    spec.coeffs.gamma1 = std::abs(p.b1);
    spec.coeffs.beta.clear();
    spec.coeffs.gamma2.clear();
    for (std::size_t j = 0; j < r; ++j) {
        spec.coeffs.beta.push_back(std::abs(p.a3[j]));
        spec.coeffs.gamma2.push_back(std::abs(p.b2[j]));
    }
    spec.delays = std::move(delays);
    spec.a = a;
    spec.b = b;

    spec.drift = [p](double, std::span<const cplx> x, std::span<const cplx> y,
                     std::span<cplx> out) {
        const double xr = x[0].real();
        double acc = p.a1 * xr + p.a2 * xr * xr * xr + p.f;
        for (std::size_t j = 0; j < p.a3.size(); ++j) {
            const double yr = y[j].real();
            acc += p.a3[j] * std::sqrt(yr * yr + 1.0);
        }
        out[0] = acc;
    };
    spec.diffusion = [p](double, std::span<const cplx> x, std::span<const cplx> y,
                         std::span<cplx> out) {
        double acc = p.b1 * std::sin(x[0].real()) + p.g;
        for (std::size_t j = 0; j < p.b2.size(); ++j) acc += p.b2[j] * std::atan(y[j].real());
        out[0] = acc;
    };
    finish(spec, std::move(initial));
    return spec;
}

ProblemSpec make_gbm(double a1, double b1, InitialSegment initial, double a, double b) {
    ScalarLinearParams p;
    p.a1 = a1;
    p.b1 = b1;
    p.a2 = {0.0};
    p.b2 = {0.0};
    ProblemSpec spec =
        make_scalar_linear(p, {DelaySpec::constant(0.0)}, std::move(initial), a, b);
    spec.name = "gbm";
    return spec;
}

}  // namespace sddestab
