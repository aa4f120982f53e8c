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

// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "sddestab/experiment.hpp"
#include "sddestab/families.hpp"

using namespace sddestab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s [%d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
}

InitialSegment constant(double v, double tau) {
    return InitialSegment::constant(StateVector{v}, 0.0, tau);
}

ProblemSpec test_equation(double b) {
    ScalarLinearParams p;
    p.a1 = -4.0;
    p.a2 = {1.0};
    p.b1 = 0.5;
    p.b2 = {0.5};
    return make_scalar_linear(p, {DelaySpec::constant(1.0)}, constant(1.0, 0.0), 0.0, b);
}

bool rel_close(double x, double ref) {
    return std::abs(x - ref) <= 1e-12 * std::max(1.0, std::abs(ref));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome contractivity() {
    const ProblemSpec prob = test_equation(5.0);
    std::ostringstream detail;
    bool ok = contraction_constant(prob.coeffs) == -5.0;
    for (std::size_t steps : {10u, 50u, 500u}) {
        const Grid g(0.0, 5.0, steps);
        const auto s = estimate_ms_deviation(prob, constant(1.0, 1.0), constant(0.5, 1.0), g,
                                             10000, 1001);
        ok = ok && s.d0 == 0.25;
        for (double e : s.envelope) ok = ok && e == 0.25;
        const auto bound = check_bound(s, 3.0);
        ok = ok && bound.violations == 0;
        detail << "h=" << g.h() << ": " << bound.violations << " violations; ";
    }
    return {ok, detail.str()};
}

Outcome asymptotic_contractivity() {
    const ProblemSpec prob = test_equation(20.0);
    const Grid g(0.0, 20.0, 200);
    const auto seq = node_sequence(prob.delays, 0.0, g.h(), g.steps(), g.steps());
    const double c2 = discrete_constants(prob.coeffs, g.h()).c2;
    auto s = estimate_ms_deviation(prob, constant(1.0, 1.0), constant(0.5, 1.0), g, 10000, 2002);
    const auto env = asymptotic_envelope(seq, c2, s.d0);
    apply_envelope(s, env.per_node);
    const auto bound = check_bound(s, 3.0);

    // per-block maxima against c2^{k+1} D0
    std::size_t block_violations = 0;
    double terminal = 0.0;
    const std::size_t last_block = seq.block_of(g.steps());
    for (std::size_t n = 1; n <= g.steps(); ++n) {
        const std::size_t k = seq.block_of(n);
        if (k == last_block) terminal = std::max(terminal, s.estimate[n]);
    }
    for (std::size_t k = 0; k <= last_block; ++k) {
        double worst = -1.0;
        std::size_t at = 0;
        for (std::size_t n = 1; n <= g.steps(); ++n)
            if (seq.block_of(n) == k && s.estimate[n] > worst) worst = s.estimate[n], at = n;
        if (worst - 3.0 * s.std_error[at] > env.per_block[k]) ++block_violations;
    }
    const bool prefix = seq.indices.size() >= 3 && seq.indices[0] == 0 &&
                        seq.indices[1] == 11 && seq.indices[2] == 22;
    const bool ok = prefix && std::abs(c2 - 12.0 / 17.0) < 1e-12 && bound.violations == 0 &&
                    block_violations == 0 && terminal < 0.01 * s.d0;
    std::ostringstream detail;
    detail << "n_k = " << seq.indices[0] << "," << seq.indices[1] << "," << seq.indices[2]
           << ",...; c2=" << c2 << "; node violations " << bound.violations
           << "; block violations " << block_violations << "; terminal block max " << terminal
           << " vs 0.01 D0 = " << 0.01 * s.d0;
    return {ok, detail.str()};
}

Outcome exact_moment() {
    const ProblemSpec gbm = make_gbm(-2.0, 1.0, constant(1.0, 0.0), 0.0, 5.0);
    const Grid g(0.0, 5.0, 50);
    const auto stats = estimate_second_moment(gbm, gbm.initial, g, 100000, 3003);
    const auto exact = exact_second_moment_scalar_linear(-2.0, 1.0, g.h(), 50, 1.0);
    std::size_t bad = 0;
    double worst = 0.0;
    for (std::size_t n = 0; n <= 50; ++n) {
        const double z = stats.std_error[n] > 0.0
                             ? std::abs(stats.mean[n] - exact[n]) / stats.std_error[n]
                             : (stats.mean[n] == exact[n] ? 0.0 : INFINITY);
        worst = std::max(worst, z);
        if (z > 3.0) ++bad;
    }
    const bool ratio = std::abs(exact[1] - 1.1 / 1.44) < 1e-15;
    std::ostringstream detail;
    detail << "ratio per step " << exact[1] << "; nodes beyond 3 stderr: " << bad
           << "; largest |z| " << worst;
    return {ratio && bad == 0, detail.str()};
}

Outcome strong_order() {
    const std::vector<double> h{0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625, 0.001953125};
    StrongOrderSetup noisy;
    noisy.a1 = -1.0;
    noisy.b1 = 0.5;
    const auto a = strong_error_slope(noisy, h, 2000, 4004);
    StrongOrderSetup smooth = noisy;
    smooth.b1 = 0.0;
    const auto b = strong_error_slope(smooth, h, 2000, 4004);
    const bool ok = a.slope >= 0.35 && a.slope <= 0.65 && b.slope >= 0.9 && b.slope <= 1.1;
    std::ostringstream detail;
    detail << "slope B1=0.5: " << a.slope << " (want [0.35, 0.65]); slope B1=0: " << b.slope
           << " (want [0.9, 1.1])";
    return {ok, detail.str()};
}

Outcome deterministic_reduction() {
    ScalarLinearParams p;
    p.a1 = -2.0;
    p.a2 = {0.5};
    const ProblemSpec dde =
        make_scalar_linear(p, {DelaySpec::constant(1.0)}, constant(1.0, 0.0), 0.0, 5.0);
    auto endpoint = [&](std::size_t steps) {
        const Grid g(0.0, 5.0, steps);
        const auto path = WienerPath::from_increments(std::vector<double>(steps, 0.0), steps, 1);
        return simulate(dde, g, path).node(steps)[0].real();
    };
    const double fine = endpoint(10000);   // h = 5e-4
    const double coarse = endpoint(5000);  // h = 1e-3
    const double reference = 2.0 * fine - coarse;
    const double e1 = std::abs(endpoint(50) - reference);
    const double e2 = std::abs(endpoint(100) - reference);
    const double ratio = e1 / e2;
    std::ostringstream detail;
    detail << "error h=0.1: " << e1 << ", h=0.05: " << e2 << ", ratio " << ratio
           << " (want [1.8, 2.2])";
    return {ratio >= 1.8 && ratio <= 2.2, detail.str()};
}

Outcome certificate_arithmetic() {
    const ProblemSpec prob = test_equation(5.0);
    const auto& k = prob.coeffs;
    const auto sr = sigma_rho(k);
    const auto asym = asymptotic_certificate(k);
    const auto d = discrete_constants(k, 0.1);
    using V = std::vector<std::size_t>;
    const V tau_seq = node_sequence(DelaySpec::constant(1.0), 0.0, 0.1, 50, 2).indices;
    const V pan_seq = node_sequence(DelaySpec::pantograph(0.5), 0.0, 0.1, 50, 3).indices;
    struct Item {
        const char* name;
        double got, want;
    };
    const Item items[] = {
        {"c", contraction_constant(k), -5.0},      {"sigma", sr.sigma, -6.5},
        {"rho", sr.rho, 1.5},                      {"nu", asym.nu.value_or(NAN), 1.5 / 6.5},
        {"ratio1", d.first_ratio, 0.6875},         {"ratio2", d.second_ratio, 12.0 / 17.0},
        {"c2", d.c2, 12.0 / 17.0},
    };
    bool ok = true;
    std::ostringstream detail;
    for (const auto& it : items) {
        if (!rel_close(it.got, it.want)) {
            ok = false;
            detail << it.name << "=" << it.got << " != " << it.want << "; ";
        }
    }
    ok = ok && tau_seq == V{0, 11, 22} && pan_seq == V{0, 2, 6, 14};
    detail << "c, sigma, rho, nu, ratios within 1e-12; sequences {";
    for (auto n : tau_seq) detail << n << ",";
    detail << "} {";
    for (auto n : pan_seq) detail << n << ",";
    detail << "}";
    return {ok, detail.str()};
}

Outcome solver_contract() {
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t residual_fail = 0, guess_fail = 0, steps = 0;
    for (int trial = 0; trial < 100; ++trial) {
        NonlinearParams p;
        p.a1 = 8.0 * u(rng) - 6.0;
        p.a2 = -3.0 * u(rng);
        p.a3 = {2.0 * u(rng) - 1.0};
        p.b1 = 2.0 * u(rng) - 1.0;
        p.b2 = {2.0 * u(rng) - 1.0};
        p.f = 2.0 * u(rng) - 1.0;
        const DelaySpec delay = trial % 3 == 0   ? DelaySpec::constant(u(rng))
                                : trial % 3 == 1 ? DelaySpec::pantograph(0.1 + 0.8 * u(rng))
                                                 : DelaySpec::piecewise_constant(0);
        const ProblemSpec prob =
            make_nonlinear(p, {delay}, constant(4.0 * u(rng) - 2.0, 0.0), 0.0, 2.0);
        const double growth = prob.coeffs.alpha + prob.coeffs.beta_sum();
        std::size_t n_steps = 4 + static_cast<std::size_t>(20.0 * u(rng));
        while (growth * (2.0 / static_cast<double>(n_steps)) >= 1.0) ++n_steps;
        const Grid g(0.0, 2.0, n_steps);
        BackwardEuler be(prob);
        Trajectory tr(g, prob.initial);
        const auto path = WienerPath::generate(7007, static_cast<std::uint64_t>(trial), g, 1);
        for (std::size_t n = 0; n < n_steps; ++n) {
            const auto a = be.solve(tr, path.step(n));
            const StateVector far{cplx(a.value[0].real() + 25.0 * (u(rng) + 1.0), 0.0)};
            const auto b = be.solve(tr, path.step(n), far.span());
            ++steps;
            if (a.residual > 1e-12 * (1.0 + a.value.norm())) ++residual_fail;
            if (b.residual > 1e-12 * (1.0 + b.value.norm())) ++residual_fail;
            if (std::abs(a.value[0] - b.value[0]) > 1e-10) ++guess_fail;
            tr.push(a.value.span());
        }
    }

    // a configured problem with (alpha + beta) h >= 1 never reaches the stepper
    const fs::path dir = fs::temp_directory_path() / "sddestab_acceptance_unsolvable";
    fs::remove_all(dir);
    const auto cfg = parse_config(
        "problem.name = nonlinear\nproblem.A1 = 1.5\nproblem.A3 = 0.5\n"
        "delay.kind = constant\ndelay.tau = 1\ngrid.b = 5\ngrid.N = 5\nmc.paths = 100\n");
    RunOptions opt;
    opt.out = dir;
    std::ostringstream log;
    bool rejected = false;
    std::string why;
    try {
        run_experiment(cfg, opt, log);
    } catch (const StepsizeError& e) {
        rejected = !fs::exists(dir / "deviation.csv");
        why = e.what();
    }
    std::ostringstream detail;
    detail << steps << " steps over 100 problems; residual failures " << residual_fail
           << "; guess disagreements " << guess_fail << "; unsolvable config "
           << (rejected ? "rejected before stepping" : "NOT rejected");
    return {residual_fail == 0 && guess_fail == 0 && rejected &&
                why.find("(alpha + beta) h < 1") != std::string::npos,
            detail.str()};
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "sddestab_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "problem.name = scalar_linear\nproblem.A1 = -4\n"
                                      "problem.A2 = 1\nproblem.B1 = 0.5\nproblem.B2 = 0.5\n"
                                      "delay.kind = constant\ndelay.tau = 1\n"
                                      "grid.b = 5\ngrid.N = 50\nmc.paths = 3000\n"
                                      "mc.seed = 8008\n";
    auto run = [&](const std::string& sub, int threads) {
        const std::string cmd = std::string(SDDESTAB_CLI) + " --threads " +
                                std::to_string(threads) + " --out " + (dir / sub).string() +
                                " deviation " + (dir / "run.cfg").string() + " > /dev/null";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const int s1 = run("a", 1), s2 = run("b", 1), s3 = run("c", 8);
    const std::string a = slurp(dir / "a" / "deviation.csv");
    const std::string b = slurp(dir / "b" / "deviation.csv");
    const std::string c = slurp(dir / "c" / "deviation.csv");
    const bool ok = s1 == 0 && s2 == 0 && s3 == 0 && !a.empty() && a == b && a == c;
    std::ostringstream detail;
    detail << "exit codes " << s1 << "," << s2 << "," << s3 << "; repeat identical: "
           << (a == b ? "yes" : "no") << "; 1 vs 8 workers identical: "
           << (a == c ? "yes" : "no") << " (" << a.size() << " bytes)";
    return {ok, detail.str()};
}

}  // namespace

int main() {
    report(1, "contractivity envelope, h in {0.5, 0.1, 0.01}", contractivity);
    report(2, "asymptotic contractivity per block", asymptotic_contractivity);
    report(3, "second moment against the exact recursion", exact_moment);
    report(4, "strong order slopes", strong_order);
    report(5, "deterministic reduction is first order", deterministic_reduction);
    report(6, "certificate arithmetic", certificate_arithmetic);
    report(7, "implicit solver contract", solver_contract);
    report(8, "deviation.csv is byte-identical across runs and workers", determinism);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
