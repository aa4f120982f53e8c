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

#include "sddestab/types.hpp"

#include <cmath>

namespace sddestab {

bool StateVector::finite() const {
    for (const auto& z : entries_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double StateVector::norm() const { return sddestab::norm(entries_); }

double StateVector::squared_norm() const { return sddestab::squared_norm(entries_); }

StateVector operator-(const StateVector& x, const StateVector& y) {
    if (x.size() != y.size()) throw ParameterError("state dimension mismatch");
    StateVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

double squared_norm(std::span<const cplx> x) {
    double s = 0.0;
    for (const auto& z : x) s += std::norm(z);
    return s;
}

double norm(std::span<const cplx> x) { return std::sqrt(squared_norm(x)); }

double squared_distance(std::span<const cplx> x, std::span<const cplx> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
    return s;
}

double real_inner(std::span<const cplx> x, std::span<const cplx> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    return s;
}

}  // namespace sddestab
