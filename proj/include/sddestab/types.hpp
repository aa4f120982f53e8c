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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sddestab {

using cplx = std::complex<double>;

// Base of every error the library raises.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Time outside the domain of an initial segment or a trajectory.
class DomainError : public Error {
  public:
    using Error::Error;
};

class ParameterError : public Error {
  public:
    using Error::Error;
};

// Stepsize incompatible with solvability or a certificate formula.
class StepsizeError : public Error {
  public:
    using Error::Error;
};

// Implicit step did not converge.
class StepError : public Error {
  public:
    StepError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

class CertificationError : public Error {
  public:
    using Error::Error;
};

/// A point of C^d. Real problems keep the imaginary parts at zero.
class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(std::size_t dim) : entries_(dim) {}
    StateVector(std::initializer_list<cplx> values) : entries_(values) {}
    explicit StateVector(std::vector<cplx> values) : entries_(std::move(values)) {}
    explicit StateVector(std::span<const cplx> values)
        : entries_(values.begin(), values.end()) {}

    static StateVector real(std::initializer_list<double> values) {
        StateVector v(values.size());
        std::size_t i = 0;
        for (double x : values) v.entries_[i++] = x;
        return v;
    }

    std::size_t size() const { return entries_.size(); }
    cplx& operator[](std::size_t i) { return entries_[i]; }
    const cplx& operator[](std::size_t i) const { return entries_[i]; }

    std::span<cplx> span() { return entries_; }
    std::span<const cplx> span() const { return entries_; }
    operator std::span<const cplx>() const { return entries_; }

    const std::vector<cplx>& entries() const { return entries_; }

    bool finite() const;
    double norm() const;
    double squared_norm() const;

    friend bool operator==(const StateVector&, const StateVector&) = default;

  private:
    std::vector<cplx> entries_;
};

StateVector operator-(const StateVector& x, const StateVector& y);

double squared_norm(std::span<const cplx> x);
double norm(std::span<const cplx> x);
double squared_distance(std::span<const cplx> x, std::span<const cplx> y);

// Re<x, y> = sum Re(conj(x_i) y_i).
double real_inner(std::span<const cplx> x, std::span<const cplx> y);

}  // namespace sddestab
