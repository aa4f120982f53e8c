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

#include "sddestab/registry.hpp"

#include <cmath>
#include <sstream>

#include "sddestab/families.hpp"

namespace sddestab {

namespace {

double scalar(const ParamMap& p, const std::string& key, double fallback = 0.0) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    if (it->second.size() != 1)
        throw ParameterError("problem." + key + " expects a single number");
    return it->second.front();
}

// One value per delay; a single value is broadcast.
std::vector<double> per_delay(const ParamMap& p, const std::string& key, std::size_t r) {
    auto it = p.find(key);
    if (it == p.end()) return std::vector<double>(r, 0.0);
    if (it->second.size() == 1) return std::vector<double>(r, it->second.front());
    if (it->second.size() != r) {
        std::ostringstream os;
        os << "problem." << key << " needs 1 or " << r << " values (one per delay), got "
           << it->second.size();
        throw ParameterError(os.str());
    }
    return it->second;
}

std::vector<double> values(const ParamMap& p, const std::string& key, std::size_t count) {
    auto it = p.find(key);
    if (it == p.end()) return std::vector<double>(count, 0.0);
    if (it->second.size() != count) {
        std::ostringstream os;
        os << "problem." << key << " needs " << count << " values, got " << it->second.size();
        throw ParameterError(os.str());
    }
    return it->second;
}

// Row-major d x d blocks, `blocks` of them, real and optional imaginary parts.
std::vector<Eigen::MatrixXcd> matrices(const ParamMap& p, const std::string& key,
                                       std::size_t d, std::size_t blocks) {
    const std::size_t per = d * d;
    auto fetch = [&](const std::string& k) -> std::vector<double> {
        auto it = p.find(k);
        if (it == p.end()) return std::vector<double>(per * blocks, 0.0);
        if (it->second.size() == per && blocks > 1) {
            std::vector<double> out;
            for (std::size_t b = 0; b < blocks; ++b)
                out.insert(out.end(), it->second.begin(), it->second.end());
            return out;
        }
        if (it->second.size() != per * blocks) {
            std::ostringstream os;
            os << "problem." << k << " needs " << per * blocks << " values (" << blocks
               << " row-major " << d << "x" << d << " blocks), got " << it->second.size();
            throw ParameterError(os.str());
        }
        return it->second;
    };
    const auto re = fetch(key);
    const auto im = fetch(key + "_im");
    std::vector<Eigen::MatrixXcd> out;
    const auto n = static_cast<Eigen::Index>(d);
    for (std::size_t b = 0; b < blocks; ++b) {
        Eigen::MatrixXcd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const std::size_t idx = b * per + static_cast<std::size_t>(i * n + j);
                m(i, j) = cplx(re[idx], im[idx]);
            }
        out.push_back(std::move(m));
    }
    return out;
}

ProblemSpec build_linear(const ParamMap& p, std::vector<DelaySpec> delays, InitialSegment xi,
                         double a, double b) {
    const double dval = scalar(p, "d", 1.0);
    if (!(dval >= 1.0) || dval != std::floor(dval) || dval > 64)
        throw ParameterError("problem.d must be an integer in [1, 64]");
    const auto d = static_cast<std::size_t>(dval);
    const std::size_t r = delays.size();
    LinearParams lp;
    lp.a1 = matrices(p, "A1", d, 1).front();
    lp.a2 = matrices(p, "A2", d, r);
    lp.b1 = matrices(p, "B1", d, 1).front();
    lp.b2 = matrices(p, "B2", d, r);
    const auto n = static_cast<Eigen::Index>(d);
    auto vec = [&](const std::string& key) {
        const auto re = values(p, key, d);
        const auto im = values(p, key + "_im", d);
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(re[i], im[i]);
        return v;
    };
    lp.f = vec("F");
    lp.g = vec("G");
    return make_linear(lp, std::move(delays), std::move(xi), a, b);
}

ProblemSpec build_scalar_linear(const ParamMap& p, std::vector<DelaySpec> delays,
                                InitialSegment xi, double a, double b) {
    const std::size_t r = delays.size();
    ScalarLinearParams sp;
    sp.a1 = scalar(p, "A1");
    sp.a2 = per_delay(p, "A2", r);
    sp.b1 = scalar(p, "B1");
    sp.b2 = per_delay(p, "B2", r);
    sp.f = scalar(p, "F");
    sp.g = scalar(p, "G");
    return make_scalar_linear(sp, std::move(delays), std::move(xi), a, b);
}

ProblemSpec build_nonlinear(const ParamMap& p, std::vector<DelaySpec> delays, InitialSegment xi,
                            double a, double b) {
    const std::size_t r = delays.size();
    NonlinearParams np;
    np.a1 = scalar(p, "A1");
    np.a2 = scalar(p, "A2", -1.0);
    np.a3 = per_delay(p, "A3", r);
    np.b1 = scalar(p, "B1");
    np.b2 = per_delay(p, "B2", r);
    np.f = scalar(p, "F");
    np.g = scalar(p, "G");
    return make_nonlinear(np, std::move(delays), std::move(xi), a, b);
}

ProblemSpec build_gbm(const ParamMap& p, std::vector<DelaySpec>, InitialSegment xi, double a,
                      double b) {
    return make_gbm(scalar(p, "A1"), scalar(p, "B1"), std::move(xi), a, b);
}

}  // namespace

const std::vector<ProblemRegistryEntry>& problem_registry() {
    static const std::vector<ProblemRegistryEntry> registry = {
        {"scalar_linear",
         "dx = (A1 x + sum A2_j y_j + F) dt + (B1 x + sum B2_j y_j + G) dw, real scalars",
         {"A1", "A2", "B1", "B2", "F", "G"},
         true,
         build_scalar_linear},
        {"linear",
         "d-dimensional linear system with complex d x d matrices A1, A2_j, B1, B2_j "
         "(row-major, *_im for imaginary parts) and vectors F, G",
         {"d", "A1", "A1_im", "A2", "A2_im", "B1", "B1_im", "B2", "B2_im", "F", "F_im", "G",
          "G_im"},
         true,
         build_linear},
        {"nonlinear",
         "dx = (A1 x + A2 x^3 + sum A3_j sqrt(y_j^2+1) + F) dt + (B1 sin x + sum B2_j atan y_j "
         "+ G) dw, A2 <= 0",
         {"A1", "A2", "A3", "B1", "B2", "F", "G"},
         true,
         build_nonlinear},
        {"gbm", "dx = A1 x dt + B1 x dw (no delay)", {"A1", "B1"}, false, build_gbm},
    };
    return registry;
}

const ProblemRegistryEntry* find_problem(std::string_view name) {
    for (const auto& e : problem_registry())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace sddestab
