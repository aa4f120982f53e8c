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

#include "sddestab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sddestab/registry.hpp"

namespace sddestab {

namespace {

std::vector<std::string> words(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

StateVector broadcast(const std::vector<double>& v, std::size_t d, std::string_view what) {
    if (v.size() == 1) return StateVector(std::vector<cplx>(d, cplx(v[0], 0.0)));
    if (v.size() != d)
        throw ConfigError({std::string(what) + " needs 1 or " + std::to_string(d) +
                           " values, got " + std::to_string(v.size())});
    std::vector<cplx> out;
    for (double x : v) out.emplace_back(x, 0.0);
    return StateVector(std::move(out));
}

std::vector<DelaySpec> build_delays(const DelayConfig& dc) {
    std::vector<DelaySpec> delays;
    std::size_t it = 0, iq = 0, ii = 0;
    for (const auto& kind : dc.kinds) {
        if (kind == "constant")
            delays.push_back(DelaySpec::constant(dc.tau.at(it++)));
        else if (kind == "pantograph")
            delays.push_back(DelaySpec::pantograph(dc.q.at(iq++)));
        else if (kind == "piecewise_constant")
            delays.push_back(DelaySpec::piecewise_constant(static_cast<int>(dc.shift.at(ii++))));
        else if (kind == "tabulated")
            delays.push_back(DelaySpec::tabulated(dc.table_t, dc.table_tau));
        else
            throw ConfigError({"unknown delay kind '" + kind + "'"});
    }
    return delays;
}

std::filesystem::path output_directory(const ExperimentConfig& config, const RunOptions& options) {
    std::filesystem::path dir = options.out ? *options.out : std::filesystem::path(config.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("failed writing " + path.string());
}

std::uint64_t effective_seed(const ExperimentConfig& config, const RunOptions& options) {
    return options.seed ? *options.seed : config.seed;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

InitialSegment parse_initial(std::string_view text, std::size_t dimension, double a,
                             double tau_max) {
    const auto tokens = words(text);
    if (tokens.empty()) throw ConfigError({"empty initial segment"});
    std::vector<double> nums;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        char* end = nullptr;
        const double v = std::strtod(tokens[i].c_str(), &end);
        if (end != tokens[i].c_str() + tokens[i].size() || !std::isfinite(v))
            throw ConfigError({"initial segment parameter '" + tokens[i] + "' is not a number"});
        nums.push_back(v);
    }
    const std::string& family = tokens[0];
    if (family == "constant") return InitialSegment::constant(broadcast(nums, dimension, "constant"), a, tau_max);
    if (family == "poly") {
        if (nums.empty()) throw ConfigError({"poly needs at least one coefficient"});
        std::vector<StateVector> coeffs;
        for (double c : nums) coeffs.push_back(broadcast({c}, dimension, "poly"));
        return InitialSegment::polynomial(std::move(coeffs), a, tau_max);
    }
    if (family == "sin") {
        if (nums.size() != 4) throw ConfigError({"sin needs: offset amplitude omega phase"});
        return InitialSegment::sinusoid(broadcast({nums[0]}, dimension, "sin"),
                                        broadcast({nums[1]}, dimension, "sin"), nums[2], nums[3],
                                        a, tau_max);
    }
    throw ConfigError({"unknown initial family '" + family + "' (constant, poly, sin)"});
}

Experiment build_experiment(const ExperimentConfig& config) {
    const ProblemRegistryEntry* entry = find_problem(config.problem);
    if (!entry) throw ConfigError({"unknown problem '" + config.problem + "'"});
    std::vector<DelaySpec> delays = entry->uses_delays ? build_delays(config.delay)
                                                       : std::vector<DelaySpec>{};

    // a placeholder segment; dimension is fixed once the problem exists
    ProblemSpec problem;
    {
        std::size_t d = 1;
        if (auto it = config.params.find("d"); it != config.params.end() && it->second.size() == 1)
            d = static_cast<std::size_t>(std::max(1.0, it->second[0]));
        InitialSegment xi0 = parse_initial(config.xi, d, config.a, 0.0);
        problem = entry->build(config.params, std::move(delays), std::move(xi0), config.a, config.b);
    }
    if (config.delay.tau_max >= 0.0 && entry->uses_delays) {
        if (config.delay.tau_max + 1e-12 < problem.tau_max) {
            std::ostringstream os;
            os.precision(17);
            os << "delay.tau_max = " << config.delay.tau_max
               << " does not cover the delays on [a, b] (need >= " << problem.tau_max << ")";
            throw ConfigError({os.str()});
        }
        problem.tau_max = config.delay.tau_max;
        problem.initial = problem.initial.rebound(problem.a, problem.tau_max);
    }

    const ValidationReport report = validate_problem(problem, config.probes);
    if (!report.passed)
        throw ConfigError({"problem '" + config.problem + "' fails its declared bounds: " +
                           report.describe()});

    Experiment ex;
    ex.xi = problem.initial;
    ex.eta = parse_initial(config.eta, problem.dimension, problem.a, problem.tau_max);
    ex.grid = Grid(config.a, config.b, config.steps);
    ex.problem = std::move(problem);
    return ex;
}

std::string CertificateReport::text() const {
    const auto& c = certificate;
    std::ostringstream os;
    os.precision(10);
    os << "classification: " << c.classification() << "\n";
    os << "contraction constant c = " << c.c << "\n";
    os << "sigma = " << c.sr.sigma << ", rho = " << c.sr.rho << "\n";
    os << "alpha0 = " << c.asymptotic.alpha0;
    if (c.asymptotic.nu)
        os << ", nu = " << *c.asymptotic.nu;
    else
        os << ", nu undefined (alpha0 >= 0)";
    os << "\n";
    if (c.c_mu) os << "C_mu = " << *c.c_mu << " (mu = " << c.mu << ")\n";
    if (c.c > 0.0)
        os << "h_max = " << c.h_max << " for c0 = " << c.c0 << "\n";
    else
        os << "any h with (alpha + beta) h < 1 is admissible (h_max = " << c.h_max << ")\n";
    for (const auto& s : c.steps)
        os << "h = " << s.h << ": c1 = " << s.c1 << ", c_tilde = " << s.c_tilde
           << ", c2 = " << s.c2 << (s.solvable ? "" : " (not solvable)") << "\n";
    for (const auto& [h, why] : c.rejected_steps) os << "h = " << h << " rejected: " << why << "\n";
    if (nodes) {
        os << "node sequence:";
        const std::size_t shown = std::min<std::size_t>(nodes->indices.size(), 8);
        for (std::size_t i = 0; i < shown; ++i) os << " " << nodes->indices[i];
        if (nodes->indices.size() > shown) os << " ...";
        os << "\n";
    }
    return os.str();
}

std::string CertificateReport::machine() const {
    const auto& c = certificate;
    std::ostringstream os;
    auto kv = [&](const std::string& k, const std::string& v) { os << k << "=" << v << "\n"; };
    kv("classification", c.classification());
    kv("c", format_number(c.c));
    kv("sigma", format_number(c.sr.sigma));
    kv("rho", format_number(c.sr.rho));
    kv("alpha0", format_number(c.asymptotic.alpha0));
    kv("nu", c.asymptotic.nu ? format_number(*c.asymptotic.nu) : "undefined");
    kv("mu", format_number(c.mu));
    kv("C_mu", c.c_mu ? format_number(*c.c_mu) : "undefined");
    kv("c0", format_number(c.c0));
    kv("h_max", format_number(c.h_max));
    kv("h", format_number(h));
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const auto& s = c.steps[i];
        const std::string p = "step." + std::to_string(i) + ".";
        kv(p + "h", format_number(s.h));
        kv(p + "first_ratio", format_number(s.first_ratio));
        kv(p + "second_ratio", format_number(s.second_ratio));
        kv(p + "c1", format_number(s.c1));
        kv(p + "c_tilde", format_number(s.c_tilde));
        kv(p + "c2", format_number(s.c2));
        kv(p + "solvable", s.solvable ? "1" : "0");
    }
    for (std::size_t i = 0; i < c.rejected_steps.size(); ++i) {
        kv("rejected." + std::to_string(i) + ".h", format_number(c.rejected_steps[i].first));
        kv("rejected." + std::to_string(i) + ".reason", c.rejected_steps[i].second);
    }
    if (nodes) {
        std::string list;
        for (auto n : nodes->indices) list += (list.empty() ? "" : ",") + std::to_string(n);
        kv("node_sequence", list);
    }
    return os.str();
}

CertificateReport run_certify(const ExperimentConfig& config) {
    const Experiment ex = build_experiment(config);
    std::vector<double> steps{ex.grid.h()};
    steps.insert(steps.end(), config.extra_steps.begin(), config.extra_steps.end());

    CertificateReport report;
    report.h = ex.grid.h();
    report.certificate =
        certify(ex.problem.coeffs, ex.problem.delays, config.c0, config.mu, steps);
    if (report.certificate.has(Classification::AsymptoticallyContractive)) {
        try {
            report.nodes = node_sequence(ex.problem.delays, ex.grid.a(), ex.grid.h(),
                                         ex.grid.steps(), ex.grid.steps());
        } catch (const CertificationError&) {
        }
    }
    return report;
}

std::string format_deviation_csv(const MsDeviationSeries& series) {
    std::string out = "n,t,estimate,stderr,envelope,violated\n";
    for (std::size_t n = 0; n < series.size(); ++n) {
        out += std::to_string(n);
        out += ',';
        out += format_number(series.time[n]);
        out += ',';
        out += format_number(series.estimate[n]);
        out += ',';
        out += format_number(series.std_error[n]);
        out += ',';
        out += format_number(series.envelope[n]);
        out += ',';
        out += series.violated[n] ? '1' : '0';
        out += '\n';
    }
    return out;
}

DeviationOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options,
                                std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    const Experiment ex = build_experiment(config);
    const CertificateReport cert = run_certify(config);
    // rejects (alpha + beta) h >= 1 before any path is simulated
    BackwardEuler(ex.problem).require_solvable(ex.grid.h());

    DeviationOutcome outcome;
    outcome.directory = output_directory(config, options);
    const std::uint64_t seed = effective_seed(config, options);
    MonteCarloOptions mc;
    mc.threads = std::max<std::size_t>(1, options.threads);
    outcome.series =
        estimate_ms_deviation(ex.problem, ex.xi, ex.eta, ex.grid, config.paths, seed, mc);

    const auto& c = cert.certificate;
    const bool asymptotic_ok = c.has(Classification::AsymptoticallyContractive) && c.c < 0.0 &&
                               cert.nodes.has_value();
    if (config.envelope == "asymptotic" && !asymptotic_ok)
        throw CertificationError(
            "analysis.envelope = asymptotic needs an asymptotically contractive problem with c < 0");
    if (config.envelope == "asymptotic" || (config.envelope == "auto" && asymptotic_ok)) {
        const double c2 = discrete_constants(ex.problem.coeffs, ex.grid.h()).c2;
        const BlockEnvelope env = asymptotic_envelope(*cert.nodes, c2, outcome.series.d0);
        apply_envelope(outcome.series, env.per_node);
        outcome.envelope = "asymptotic";
    } else {
        outcome.envelope = "finite";
        if (c.c > 0.0 && ex.grid.h() > c.h_max)
            log << "warning: h = " << ex.grid.h() << " exceeds h_max = " << c.h_max
                << "; the envelope is not certified at this stepsize\n";
    }
    outcome.bound = check_bound(outcome.series, config.slack);
    outcome.series.violated = outcome.bound.violated;
    outcome.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    write_file(outcome.directory / "deviation.csv", format_deviation_csv(outcome.series));
    write_file(outcome.directory / "certificate.txt", cert.machine());
    std::ostringstream summary;
    summary << "problem=" << config.problem << "\n";
    summary << "envelope=" << outcome.envelope << "\n";
    summary << "violations=" << outcome.bound.violations << "\n";
    summary << "worst_margin=" << format_number(outcome.bound.worst_margin) << "\n";
    summary << "worst_node=" << outcome.bound.worst_node << "\n";
    summary << "slack_sigmas=" << format_number(config.slack) << "\n";
    summary << "d0=" << format_number(outcome.series.d0) << "\n";
    summary << "h=" << format_number(outcome.series.h) << "\n";
    summary << "paths=" << outcome.series.paths << "\n";
    summary << "seed=" << seed << "\n";
    summary << "runtime_seconds=" << format_number(outcome.runtime_seconds) << "\n";
    write_file(outcome.directory / "summary.txt", summary.str());

    log << cert.text();
    log << "envelope: " << outcome.envelope << ", violations: " << outcome.bound.violations
        << " of " << outcome.series.size() << " nodes, worst margin "
        << outcome.bound.worst_margin << " at node " << outcome.bound.worst_node << "\n";
    log << "wrote " << (outcome.directory / "deviation.csv").string() << "\n";
    return outcome;
}

std::filesystem::path run_simulate(const ExperimentConfig& config, const RunOptions& options) {
    const Experiment ex = build_experiment(config);
    BackwardEuler stepper(ex.problem);
    stepper.require_solvable(ex.grid.h());
    const WienerPath path = WienerPath::generate(effective_seed(config, options), 0, ex.grid,
                                                 ex.problem.wiener_dimension);
    Trajectory x(ex.grid, ex.xi);
    Trajectory y(ex.grid, ex.eta);
    stepper.run(x, path);
    stepper.run(y, path);

    const std::size_t d = ex.problem.dimension;
    std::string out = "n,t";
    for (std::size_t i = 0; i < d; ++i) {
        const std::string s = std::to_string(i);
        out += ",x" + s + "_re,x" + s + "_im";
    }
    for (std::size_t i = 0; i < d; ++i) {
        const std::string s = std::to_string(i);
        out += ",y" + s + "_re,y" + s + "_im";
    }
    out += "\n";
    for (std::size_t n = 0; n <= ex.grid.steps(); ++n) {
        out += std::to_string(n) + "," + format_number(ex.grid.node(n));
        for (const Trajectory* tr : {&x, &y})
            for (const cplx& v : tr->node(n))
                out += "," + format_number(v.real()) + "," + format_number(v.imag());
        out += "\n";
    }
    const auto file = output_directory(config, options) / "trajectory.csv";
    write_file(file, out);
    return file;
}

StrongOrderResult run_order(const ExperimentConfig& config, const RunOptions& options,
                            std::ostream& log) {
    const Experiment ex = build_experiment(config);
    if (ex.problem.name != "gbm")
        throw ConfigError({"order needs problem.name = gbm (the exact solution is known)"});
    StrongOrderSetup setup;
    auto param = [&](const char* key) {
        auto it = config.params.find(key);
        return it == config.params.end() ? 0.0 : it->second.at(0);
    };
    setup.a1 = param("A1");
    setup.b1 = param("B1");
    setup.x0 = ex.xi(ex.grid.a())[0].real();
    setup.horizon = config.b - config.a;
    MonteCarloOptions mc;
    mc.threads = std::max<std::size_t>(1, options.threads);
    const StrongOrderResult result = strong_error_slope(setup, config.order_steps, config.paths,
                                                        effective_seed(config, options), mc);
    std::string out = "h,rms_error\n";
    for (std::size_t i = 0; i < result.h.size(); ++i)
        out += format_number(result.h[i]) + "," + format_number(result.rms_error[i]) + "\n";
    const auto dir = output_directory(config, options);
    write_file(dir / "order.csv", out);
    write_file(dir / "summary.txt", "slope=" + format_number(result.slope) + "\npaths=" +
                                        std::to_string(config.paths) + "\nseed=" +
                                        std::to_string(effective_seed(config, options)) + "\n");
    log << "strong order slope " << result.slope << "\n";
    return result;
}

}  // namespace sddestab
