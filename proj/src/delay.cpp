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

#include "sddestab/delay.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sddestab/types.hpp"

namespace sddestab {

DelaySpec DelaySpec::constant(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw ParameterError("constant delay requires a finite tau >= 0");
    return DelaySpec(Kind::Constant, tau);
}

DelaySpec DelaySpec::pantograph(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw ParameterError("pantograph ratio q must lie in (0, 1)");
    return DelaySpec(Kind::Pantograph, q);
}

DelaySpec DelaySpec::piecewise_constant(int shift) {
    if (shift < 0)
        throw ParameterError("piecewise constant argument shift must be nonnegative");
    return DelaySpec(Kind::PiecewiseConstant, static_cast<double>(shift));
}

DelaySpec DelaySpec::tabulated(std::vector<double> times, std::vector<double> taus) {
    if (times.empty() || times.size() != taus.size())
        throw ParameterError("tabulated delay needs matching, nonempty time and tau samples");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(taus[i]))
            throw ParameterError("tabulated delay samples must be finite");
        if (taus[i] < 0.0) throw ParameterError("tabulated delay values must be >= 0");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw ParameterError("tabulated delay times must be strictly increasing");
    }
    DelaySpec d(Kind::Tabulated, 0.0);
    d.times_ = std::move(times);
    d.taus_ = std::move(taus);
    return d;
}

double DelaySpec::tabulated_tau(double t) const {
    if (t <= times_.front()) return taus_.front();
    if (t >= times_.back()) return taus_.back();
    auto hi = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t j = static_cast<std::size_t>(hi - times_.begin());
    double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
    return (1.0 - w) * taus_[j - 1] + w * taus_[j];
}

double DelaySpec::delayed_time(double t) const {
    switch (kind_) {
        case Kind::Constant:
            return t - param_;
        case Kind::Pantograph:
            return param_ * t;
        case Kind::PiecewiseConstant:
            return std::floor(t - param_);
        case Kind::Tabulated:
            return t - tabulated_tau(t);
    }
    return t;
}

double DelaySpec::required_tau_max(double a, double b) const {
    double lowest = a;
    switch (kind_) {
        case Kind::Constant:
            lowest = a - param_;
            break;
        case Kind::Pantograph:
            lowest = std::min(delayed_time(a), delayed_time(b));
            break;
        case Kind::PiecewiseConstant:
            lowest = std::floor(a - param_);
            break;
        case Kind::Tabulated: {
            // t - tau(t) is piecewise linear: the infimum sits at a window end
            // or at a table knot.
            lowest = std::min(delayed_time(a), delayed_time(b));
            for (double knot : times_)
                if (knot > a && knot < b) lowest = std::min(lowest, delayed_time(knot));
            break;
        }
    }
    return std::max(0.0, a - lowest);
}

std::string DelaySpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Constant:
            os << "constant(tau=" << param_ << ")";
            break;
        case Kind::Pantograph:
            os << "pantograph(q=" << param_ << ")";
            break;
        case Kind::PiecewiseConstant:
            os << "piecewise_constant(i=" << shift() << ")";
            break;
        case Kind::Tabulated:
            os << "tabulated(" << times_.size() << " samples)";
            break;
    }
    return os.str();
}

const char* to_string(DelaySpec::Kind kind) {
    switch (kind) {
        case DelaySpec::Kind::Constant: return "constant";
        case DelaySpec::Kind::Pantograph: return "pantograph";
        case DelaySpec::Kind::PiecewiseConstant: return "piecewise_constant";
        case DelaySpec::Kind::Tabulated: return "tabulated";
    }
    return "unknown";
}

}  // namespace sddestab
