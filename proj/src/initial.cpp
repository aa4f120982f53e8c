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

#include "sddestab/initial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sddestab {

namespace {

void require_finite(const StateVector& v, const char* what) {
    if (!v.finite()) throw ParameterError(std::string(what) + " must be finite");
}

void require_domain(double a, double tau_max) {
    if (!std::isfinite(a) || !std::isfinite(tau_max) || tau_max < 0.0)
        throw ParameterError("initial segment domain needs finite a and tau_max >= 0");
}

}  // namespace

InitialSegment InitialSegment::constant(StateVector value, double a, double tau_max) {
    require_domain(a, tau_max);
    require_finite(value, "constant initial value");
    if (value.size() == 0) throw ParameterError("initial value must have dimension >= 1");
    InitialSegment s;
    s.family_ = Family::Constant;
    s.dim_ = value.size();
    s.a_ = a;
    s.tau_max_ = tau_max;
    s.coeffs_ = {std::move(value)};
    return s;
}

InitialSegment InitialSegment::polynomial(std::vector<StateVector> coeffs, double a,
                                          double tau_max) {
    require_domain(a, tau_max);
    if (coeffs.empty() || coeffs.front().size() == 0)
        throw ParameterError("polynomial initial segment needs at least one coefficient");
    for (const auto& c : coeffs) {
        require_finite(c, "polynomial coefficient");
        if (c.size() != coeffs.front().size())
            throw ParameterError("polynomial coefficients must share one dimension");
    }
    InitialSegment s;
    s.family_ = Family::Polynomial;
    s.dim_ = coeffs.front().size();
    s.a_ = a;
    s.tau_max_ = tau_max;
    s.coeffs_ = std::move(coeffs);
    return s;
}

InitialSegment InitialSegment::sinusoid(StateVector offset, StateVector amplitude,
                                        double omega, double phase, double a,
                                        double tau_max) {
    require_domain(a, tau_max);
    require_finite(offset, "sinusoid offset");
    require_finite(amplitude, "sinusoid amplitude");
    if (offset.size() == 0 || offset.size() != amplitude.size())
        throw ParameterError("sinusoid offset and amplitude must share one dimension");
    if (!std::isfinite(omega) || !std::isfinite(phase))
        throw ParameterError("sinusoid frequency and phase must be finite");
    InitialSegment s;
    s.family_ = Family::Sinusoid;
    s.dim_ = offset.size();
    s.a_ = a;
    s.tau_max_ = tau_max;
    s.coeffs_ = {std::move(offset), std::move(amplitude)};
    s.omega_ = omega;
    s.phase_ = phase;
    return s;
}

InitialSegment InitialSegment::rebound(double a, double tau_max) const {
    require_domain(a, tau_max);
    InitialSegment s = *this;
    s.a_ = a;
    s.tau_max_ = tau_max;
    return s;
}

bool InitialSegment::contains(double t) const {
    return t >= lower() && t <= upper();
}

StateVector InitialSegment::operator()(double t) const {
    StateVector out(dim_);
    eval_into(t, out.span());
    return out;
}

void InitialSegment::eval_into(double t, std::span<cplx> out) const {
    if (!contains(t)) {
        std::ostringstream os;
        os << "time " << t << " outside the initial interval [" << lower() << ", "
           << upper() << "]";
        throw DomainError(os.str());
    }
    eval_unchecked(t, out);
}

void InitialSegment::eval_unchecked(double t, std::span<cplx> out) const {
    switch (family_) {
        case Family::Constant:
            std::copy(coeffs_[0].entries().begin(), coeffs_[0].entries().end(), out.begin());
            return;
        case Family::Polynomial:
            // Horner
            for (std::size_t i = 0; i < dim_; ++i) {
                cplx acc = 0.0;
                for (auto k = coeffs_.size(); k-- > 0;) acc = acc * t + coeffs_[k][i];
                out[i] = acc;
            }
            return;
        case Family::Sinusoid: {
            const double s = std::sin(omega_ * t + phase_);
            for (std::size_t i = 0; i < dim_; ++i) out[i] = coeffs_[0][i] + coeffs_[1][i] * s;
            return;
        }
    }
}

std::string InitialSegment::describe() const {
    std::ostringstream os;
    auto print = [&os](const StateVector& v) {
        os << "(";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ", ";
            if (v[i].imag() == 0.0)
                os << v[i].real();
            else
                os << v[i];
        }
        os << ")";
    };
    switch (family_) {
        case Family::Constant:
            os << "constant ";
            print(coeffs_[0]);
            break;
        case Family::Polynomial:
            os << "polynomial degree " << coeffs_.size() - 1;
            break;
        case Family::Sinusoid:
            os << "sinusoid omega=" << omega_ << " phase=" << phase_;
            break;
    }
    return os.str();
}

double sup_squared_distance(const InitialSegment& xi, const InitialSegment& eta,
                            std::size_t samples) {
    if (xi.dimension() != eta.dimension())
        throw ParameterError("initial segments have different dimensions");
    const double lo = std::max(xi.lower(), eta.lower());
    const double hi = std::min(xi.upper(), eta.upper());
    if (lo > hi) throw ParameterError("initial segments have disjoint domains");

    StateVector x(xi.dimension()), y(eta.dimension());
    if (xi.family() == InitialSegment::Family::Constant &&
        eta.family() == InitialSegment::Family::Constant) {
        xi.eval_into(hi, x.span());
        eta.eval_into(hi, y.span());
        return squared_distance(x, y);
    }
    samples = std::max<std::size_t>(samples, 2);
    double best = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        double t = (k + 1 == samples)
                       ? hi
                       : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
        xi.eval_into(t, x.span());
        eta.eval_into(t, y.span());
        best = std::max(best, squared_distance(x, y));
    }
    return best;
}

HistoryFn perturb_history(HistoryFn history, unsigned n, double t, double tau_max) {
    if (!(tau_max > 0.0) || static_cast<double>(n) * tau_max <= 1.0) {
        std::ostringstream os;
        os << "perturbation index n=" << n << " must exceed 1/tau_max (tau_max=" << tau_max
           << ")";
        throw ParameterError(os.str());
    }
    const double cut = t - 1.0 / static_cast<double>(n);
    StateVector frozen = history(cut);
    return [history = std::move(history), cut, frozen = std::move(frozen)](double u) {
        return u <= cut ? history(u) : frozen;
    };
}

}  // namespace sddestab
