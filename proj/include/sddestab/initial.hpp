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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sddestab/types.hpp"

namespace sddestab {

/// Deterministic initial function xi on [a - tau_max, a].
///
/// Three families are available: a constant vector, a polynomial in t with
/// vector coefficients, and offset + amplitude * sin(omega t + phase).
class InitialSegment {
  public:
    enum class Family { Constant, Polynomial, Sinusoid };

    InitialSegment() = default;

    static InitialSegment constant(StateVector value, double a, double tau_max);
    // xi(t) = sum_k coeffs[k] t^k
    static InitialSegment polynomial(std::vector<StateVector> coeffs, double a,
                                     double tau_max);
    static InitialSegment sinusoid(StateVector offset, StateVector amplitude,
                                   double omega, double phase, double a,
                                   double tau_max);

    // Same function on a different domain.
    InitialSegment rebound(double a, double tau_max) const;

    Family family() const { return family_; }
    std::size_t dimension() const { return dim_; }
    double lower() const { return a_ - tau_max_; }
    double upper() const { return a_; }
    double tau_max() const { return tau_max_; }

    bool contains(double t) const;

    // Throws DomainError outside [a - tau_max, a].
    StateVector operator()(double t) const;
    void eval_into(double t, std::span<cplx> out) const;

    std::string describe() const;

  private:
    void eval_unchecked(double t, std::span<cplx> out) const;

    Family family_ = Family::Constant;
    std::size_t dim_ = 0;
    double a_ = 0.0;
    double tau_max_ = 0.0;
    std::vector<StateVector> coeffs_;  // constant: {value}; sinusoid: {offset, amplitude}
    double omega_ = 0.0;
    double phase_ = 0.0;
};

// sup over the common domain of |xi(t) - eta(t)|^2. Exact for two constants,
// otherwise a dense uniform sample including both endpoints.
double sup_squared_distance(const InitialSegment& xi, const InitialSegment& eta,
                            std::size_t samples = 4097);

using HistoryFn = std::function<StateVector(double)>;

/// The 1/n-perturbed history: equal to `history` up to t - 1/n and frozen at
/// history(t - 1/n) afterwards. Requires n > 1/tau_max.
HistoryFn perturb_history(HistoryFn history, unsigned n, double t, double tau_max);

}  // namespace sddestab
