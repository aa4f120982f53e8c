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

#include <string>
#include <vector>

namespace sddestab {

/// Delay function tau(t) of a stochastic delay equation, represented by the
/// delayed time t - tau(t) it produces.
///
/// Constant      t - tau_c
/// Pantograph    q t, 0 < q < 1
/// Piecewise     floor(t - i), i a nonnegative integer
/// Tabulated     t - tau(t), tau linearly interpolated between samples and
///               held constant outside the table
class DelaySpec {
  public:
    enum class Kind { Constant, Pantograph, PiecewiseConstant, Tabulated };

    static DelaySpec constant(double tau);
    static DelaySpec pantograph(double q);
    static DelaySpec piecewise_constant(int shift);
    static DelaySpec tabulated(std::vector<double> times, std::vector<double> taus);

    Kind kind() const { return kind_; }

    double delayed_time(double t) const;

    // Smallest tau >= 0 with t - tau(t) >= a - tau for all t in [a, b].
    double required_tau_max(double a, double b) const;

    // True when t - tau(t) -> +inf is known in closed form.
    bool diverges() const { return kind_ != Kind::Tabulated; }

    double tau() const { return param_; }
    double ratio() const { return param_; }
    int shift() const { return static_cast<int>(param_); }
    const std::vector<double>& table_times() const { return times_; }
    const std::vector<double>& table_taus() const { return taus_; }

    std::string describe() const;

  private:
    DelaySpec(Kind kind, double param) : kind_(kind), param_(param) {}

    double tabulated_tau(double t) const;

    Kind kind_;
    double param_ = 0.0;
    std::vector<double> times_;
    std::vector<double> taus_;
};

const char* to_string(DelaySpec::Kind kind);

}  // namespace sddestab
