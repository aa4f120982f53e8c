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

#include "sddestab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sddestab/linalg.hpp"

namespace sddestab {

double contraction_constant(const CoefficientSet& k) {
    const double g = k.gamma1 + k.gamma2_sum();
    return 2.0 * k.alpha + 2.0 * k.beta_sum() + g * g;
}

SigmaRho sigma_rho(const CoefficientSet& k) {
    const double beta = k.beta_sum();
    const double g2 = k.gamma2_sum();
    return {2.0 * k.alpha + beta + k.gamma1 * g2 + k.gamma1 * k.gamma1,
            beta + k.gamma1 * g2 + g2 * g2};
}

double AsymptoticCertificate::c_mu(double mu) const {
    if (!nu) throw CertificationError("C_mu is undefined without nu (alpha0 >= 0)");
    return *nu + (1.0 - *nu) * std::exp(alpha0 * mu);
}

AsymptoticCertificate asymptotic_certificate(const CoefficientSet& k) {
    const SigmaRho sr = sigma_rho(k);
    AsymptoticCertificate cert;
    cert.alpha0 = sr.sigma;
    if (sr.sigma < 0.0) cert.nu = sr.rho / std::abs(sr.sigma);
    cert.ok = cert.nu.has_value() && *cert.nu < 1.0;
    return cert;
}

DiscreteConstants discrete_constants(const CoefficientSet& k, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw StepsizeError("stepsize h must be positive");
    const double beta = k.beta_sum();
    const double g = k.gamma1 + k.gamma2_sum();
    const double den1 = 1.0 - 2.0 * h * k.alpha - 2.0 * h * beta;
    const double den2 = 1.0 - 2.0 * h * k.alpha - h * beta;
    if (!(den1 > 0.0)) {
        std::ostringstream os;
        os << "h=" << h << " makes 1 - 2h*alpha - 2h*beta = " << den1 << " non-positive";
        if ((k.alpha + beta) * h >= 1.0)
            os << " (not solvable: (alpha + beta) h = " << (k.alpha + beta) * h << " >= 1)";
        throw StepsizeError(os.str());
    }
    if (!(den2 > 0.0)) {
        std::ostringstream os;
        os << "h=" << h << " makes 1 - 2h*alpha - h*beta = " << den2 << " non-positive";
        throw StepsizeError(os.str());
    }
    DiscreteConstants out;
    out.h = h;
    out.first_ratio = (1.0 + h * g * g) / den1;
    out.second_ratio = (1.0 + h * beta + h * g * g) / den2;
    out.c1 = std::max(out.first_ratio, out.second_ratio);
    out.c_tilde = out.c1 / h;
    out.c2 = out.c1;
    out.solvable = (k.alpha + beta) * h < 1.0;
    return out;
}

double max_stepsize(const CoefficientSet& k, double c0) {
    if (!(c0 > 0.0 && c0 < 1.0)) throw ParameterError("c0 must lie in (0, 1)");
    const double growth = k.alpha + k.beta_sum();
    const double cap = growth > 0.0 ? (1.0 - kSolvabilityMargin) / growth
                                    : std::numeric_limits<double>::infinity();
    const double c = contraction_constant(k);
    if (c <= 0.0) return cap;
    return std::min(c0 / c, cap);
}

double analytic_envelope(double c, double d0, double elapsed) {
    return c > 0.0 ? std::exp(c * elapsed) * d0 : d0;
}

double discrete_envelope(double c, double c_tilde, double d0, double elapsed) {
    return c > 0.0 ? std::exp(c_tilde * elapsed) * d0 : d0;
}

std::size_t NodeSequence::block_of(std::size_t n) const {
    if (n == 0 || indices.empty()) return 0;
    // first index >= n closes the block containing n
    auto it = std::lower_bound(indices.begin(), indices.end(), n);
    if (it == indices.end()) return indices.size() - 1;
    return static_cast<std::size_t>(it - indices.begin()) - 1;
}

NodeSequence node_sequence(std::span<const DelaySpec> delays, double a, double h,
                           std::size_t steps, std::size_t count) {
    if (delays.empty()) throw ParameterError("node sequence needs at least one delay");
    if (!(h > 0.0)) throw ParameterError("node sequence needs h > 0");
    const bool closed_form =
        std::all_of(delays.begin(), delays.end(), [](const DelaySpec& d) { return d.diverges(); });

    auto node = [a, h](std::size_t j) { return a + static_cast<double>(j) * h; };

    // latest[j] = min over grid times t_i, i >= j, of the smallest delayed time
    std::vector<double> latest(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& d : delays) s = std::min(s, d.delayed_time(node(j)));
        latest[j] = s;
    }
    for (std::size_t j = steps; j-- > 0;) latest[j] = std::min(latest[j], latest[j + 1]);

    const double slack = 1e-9 * h;
    NodeSequence seq{{0}, a, h, steps};
    std::size_t j = 1;
    while (seq.indices.size() < count + 1) {
        const double target = node(seq.indices.back() + 1);
        while (j <= steps && latest[j] < target - slack) ++j;
        if (j > steps) break;
        seq.indices.push_back(j);
        ++j;
    }
    if (!closed_form && seq.indices.size() < 2 && count > 0)
        throw CertificationError(
            "delayed time does not advance past t_1 within the window; cannot build a node "
            "sequence for this delay");
    return seq;
}

NodeSequence node_sequence(const DelaySpec& delay, double a, double h, std::size_t steps,
                           std::size_t count) {
    return node_sequence(std::span<const DelaySpec>(&delay, 1), a, h, steps, count);
}

CoefficientSet linear_coeffs(const Eigen::MatrixXcd& a1, std::span<const Eigen::MatrixXcd> a2,
                             const Eigen::MatrixXcd& b1, std::span<const Eigen::MatrixXcd> b2) {
    const Eigen::Index d = a1.rows();
    if (d == 0 || a1.cols() != d) throw ParameterError("A1 must be a nonempty square matrix");
    if (a2.empty() || a2.size() != b2.size())
        throw ParameterError("A2 and B2 need one matrix per delay");
    auto same = [d](const Eigen::MatrixXcd& m) { return m.rows() == d && m.cols() == d; };
    if (!same(b1)) throw ParameterError("B1 must be d x d");
    for (std::size_t j = 0; j < a2.size(); ++j)
        if (!same(a2[j]) || !same(b2[j]))
            throw ParameterError("A2 and B2 blocks must be d x d");

    CoefficientSet k;
    k.alpha = symmetric_part_max_eigenvalue(a1);
    k.gamma1 = b1.norm();
    k.beta.clear();
    k.gamma2.clear();
    for (std::size_t j = 0; j < a2.size(); ++j) {
        k.beta.push_back(a2[j].norm());
        k.gamma2.push_back(b2[j].norm());
    }
    return k;
}

bool scalar_linear_criterion(cplx a1, cplx a2, cplx b1, cplx b2) {
    const double s = std::abs(b1) + std::abs(b2);
    return a1.real() + std::abs(a2) + 0.5 * s * s < 0.0;
}

const char* to_string(Classification c) {
    switch (c) {
        case Classification::StableInMeanSquare: return "stable_in_mean_square";
        case Classification::Contractive: return "contractive";
        case Classification::AsymptoticallyContractive: return "asymptotically_contractive";
        case Classification::Uncertified: return "uncertified";
    }
    return "unknown";
}

bool StabilityCertificate::has(Classification cls) const {
    return std::find(classes.begin(), classes.end(), cls) != classes.end();
}

std::string StabilityCertificate::classification() const {
    std::string out;
    for (auto cls : classes) {
        if (!out.empty()) out += ",";
        out += to_string(cls);
    }
    return out;
}

StabilityCertificate certify(const CoefficientSet& k, std::span<const DelaySpec> delays,
                             double c0, double mu, std::span<const double> steps) {
    k.check();
    if (!(mu > 0.0)) throw ParameterError("mu must be positive");
    StabilityCertificate cert;
    cert.c = contraction_constant(k);
    cert.sr = sigma_rho(k);
    cert.asymptotic = asymptotic_certificate(k);
    cert.mu = mu;
    cert.c0 = c0;
    if (cert.asymptotic.nu) cert.c_mu = cert.asymptotic.c_mu(mu);
    cert.h_max = max_stepsize(k, c0);

    if (!std::isfinite(cert.c))
        cert.classes.push_back(Classification::Uncertified);
    else if (cert.c > 0.0)
        cert.classes.push_back(Classification::StableInMeanSquare);
    else
        cert.classes.push_back(Classification::Contractive);

    const bool divergent = !delays.empty() && std::all_of(delays.begin(), delays.end(),
                                                          [](const DelaySpec& d) {
                                                              return d.diverges();
                                                          });
    if (cert.asymptotic.ok && divergent)
        cert.classes.push_back(Classification::AsymptoticallyContractive);

    for (double h : steps) {
        try {
            cert.steps.push_back(discrete_constants(k, h));
        } catch (const StepsizeError& e) {
            cert.rejected_steps.emplace_back(h, e.what());
        }
    }
    return cert;
}

}  // namespace sddestab
