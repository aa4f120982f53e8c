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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "sddestab/experiment.hpp"
#include "sddestab/registry.hpp"

namespace py = pybind11;
using namespace sddestab;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict discrete_dict(const DiscreteConstants& d) {
    py::dict out;
    out["h"] = d.h;
    out["first_ratio"] = d.first_ratio;
    out["second_ratio"] = d.second_ratio;
    out["c1"] = d.c1;
    out["c_tilde"] = d.c_tilde;
    out["c2"] = d.c2;
    out["solvable"] = d.solvable;
    return out;
}

py::dict series_dict(const MsDeviationSeries& s, const BoundReport& bound) {
    py::dict out;
    out["t"] = to_array(s.time);
    out["estimate"] = to_array(s.estimate);
    out["stderr"] = to_array(s.std_error);
    out["envelope"] = to_array(s.envelope);
    out["violated"] = bound.violated;
    out["violations"] = bound.violations;
    out["worst_margin"] = bound.worst_margin;
    out["worst_node"] = bound.worst_node;
    out["d0"] = s.d0;
    out["h"] = s.h;
    out["paths"] = s.paths;
    out["seed"] = s.seed;
    return out;
}

RunOptions options(std::size_t threads, std::optional<std::uint64_t> seed,
                   std::optional<std::filesystem::path> out) {
    RunOptions o;
    o.threads = threads;
    o.seed = seed;
    o.out = std::move(out);
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stochastic delay equations: backward Euler, mean-square certificates, Monte Carlo checks";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<StepsizeError>(m, "StepsizeError", base.ptr());
    py::register_exception<StepError>(m, "StepError", base.ptr());
    py::register_exception<CertificationError>(m, "CertificationError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<CoefficientSet>(m, "CoefficientSet")
        .def(py::init([](double alpha, std::vector<double> beta, double gamma1,
                         std::vector<double> gamma2) {
                 CoefficientSet k;
                 k.alpha = alpha;
                 k.beta = std::move(beta);
                 k.gamma1 = gamma1;
                 k.gamma2 = std::move(gamma2);
                 return k;
             }),
             py::arg("alpha"), py::arg("beta"), py::arg("gamma1"), py::arg("gamma2"))
        .def_readwrite("alpha", &CoefficientSet::alpha)
        .def_readwrite("beta", &CoefficientSet::beta)
        .def_readwrite("gamma1", &CoefficientSet::gamma1)
        .def_readwrite("gamma2", &CoefficientSet::gamma2)
        .def("__repr__", [](const CoefficientSet& k) {
            std::ostringstream os;
            os << "CoefficientSet(alpha=" << k.alpha << ", gamma1=" << k.gamma1 << ", "
               << k.beta.size() << " delay(s))";
            return os.str();
        });

    py::class_<DelaySpec>(m, "Delay")
        .def_static("constant", &DelaySpec::constant, py::arg("tau"))
        .def_static("pantograph", &DelaySpec::pantograph, py::arg("q"))
        .def_static("piecewise_constant", &DelaySpec::piecewise_constant, py::arg("shift"))
        .def_static("tabulated", &DelaySpec::tabulated, py::arg("times"), py::arg("taus"))
        .def("delayed_time", &DelaySpec::delayed_time, py::arg("t"))
        .def("required_tau_max", &DelaySpec::required_tau_max, py::arg("a"), py::arg("b"))
        .def_property_readonly("kind", [](const DelaySpec& d) { return to_string(d.kind()); })
        .def("__repr__", &DelaySpec::describe);

    m.def("contraction_constant", &contraction_constant, py::arg("coeffs"));
    m.def("sigma_rho", [](const CoefficientSet& k) {
        const auto sr = sigma_rho(k);
        return py::make_tuple(sr.sigma, sr.rho);
    }, py::arg("coeffs"));
    m.def("asymptotic_certificate", [](const CoefficientSet& k, double mu) {
        const auto a = asymptotic_certificate(k);
        py::dict out;
        out["alpha0"] = a.alpha0;
        out["nu"] = a.nu;
        out["ok"] = a.ok;
        out["c_mu"] = a.nu ? py::cast(a.c_mu(mu)) : py::none();
        return out;
    }, py::arg("coeffs"), py::arg("mu") = 1.0);
    m.def("discrete_constants", [](const CoefficientSet& k, double h) {
        return discrete_dict(discrete_constants(k, h));
    }, py::arg("coeffs"), py::arg("h"));
    m.def("max_stepsize", &max_stepsize, py::arg("coeffs"), py::arg("c0") = 0.5);
    m.def("node_sequence", [](const std::vector<DelaySpec>& delays, double a, double h,
                              std::size_t steps, std::size_t count) {
        return node_sequence(delays, a, h, steps, count).indices;
    }, py::arg("delays"), py::arg("a"), py::arg("h"), py::arg("steps"), py::arg("count"));
    m.def("scalar_linear_criterion", &scalar_linear_criterion, py::arg("a1"), py::arg("a2"),
          py::arg("b1"), py::arg("b2"));

    m.def("problems", [] {
        py::dict out;
        for (const auto& e : problem_registry()) out[py::str(e.name)] = e.keys;
        return out;
    }, "Registered problem families and their parameter keys.");

    py::class_<ExperimentConfig>(m, "Config")
        .def_readonly("problem", &ExperimentConfig::problem)
        .def_readonly("params", &ExperimentConfig::params)
        .def_readonly("a", &ExperimentConfig::a)
        .def_readonly("b", &ExperimentConfig::b)
        .def_readonly("steps", &ExperimentConfig::steps)
        .def_readonly("paths", &ExperimentConfig::paths)
        .def_readonly("seed", &ExperimentConfig::seed)
        .def_property_readonly("h", [](const ExperimentConfig& c) {
            return (c.b - c.a) / static_cast<double>(c.steps);
        });
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));

    m.def("certify", [](const ExperimentConfig& c) {
        const auto report = run_certify(c);
        py::dict out;
        std::istringstream in(report.machine());
        for (std::string line; std::getline(in, line);) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) out[py::str(line.substr(0, eq))] = line.substr(eq + 1);
        }
        out["text"] = report.text();
        return out;
    }, py::arg("config"), "Certificate constants as strings, keyed as in certificate.txt.");

    m.def("estimate_deviation", [](const ExperimentConfig& c, std::size_t threads,
                                   std::optional<std::uint64_t> seed) {
        const Experiment ex = build_experiment(c);
        MonteCarloOptions mc;
        mc.threads = threads;
        MsDeviationSeries s;
        {
            py::gil_scoped_release release;
            s = estimate_ms_deviation(ex.problem, ex.xi, ex.eta, ex.grid, c.paths,
                                      seed.value_or(c.seed), mc);
        }
        return series_dict(s, check_bound(s, c.slack));
    }, py::arg("config"), py::arg("threads") = 1, py::arg("seed") = py::none(),
       "Mean-square deviation with the finite-window envelope; writes nothing.");

    m.def("run_deviation", [](const ExperimentConfig& c, std::optional<std::filesystem::path> out,
                              std::size_t threads, std::optional<std::uint64_t> seed) {
        std::ostringstream log;
        DeviationOutcome o;
        {
            py::gil_scoped_release release;
            o = run_experiment(c, options(threads, seed, std::move(out)), log);
        }
        py::dict d = series_dict(o.series, o.bound);
        d["envelope_kind"] = o.envelope;
        d["directory"] = o.directory;
        d["log"] = log.str();
        return d;
    }, py::arg("config"), py::arg("out") = py::none(), py::arg("threads") = 1,
       py::arg("seed") = py::none(),
       "Full experiment: writes deviation.csv, certificate.txt and summary.txt.");

    m.def("simulate", [](const ExperimentConfig& c, std::optional<std::uint64_t> seed,
                         std::uint64_t path_index) {
        const Experiment ex = build_experiment(c);
        const auto path = WienerPath::generate(seed.value_or(c.seed), path_index, ex.grid,
                                               ex.problem.wiener_dimension);
        const auto [x, y] = simulate_pair(ex.problem, ex.xi, ex.eta, ex.grid, path);
        const std::size_t n = ex.grid.steps() + 1, d = ex.problem.dimension;
        py::array_t<cplx> xs({n, d}), ys({n, d});
        auto xv = xs.mutable_unchecked<2>();
        auto yv = ys.mutable_unchecked<2>();
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = ex.grid.node(i);
            for (std::size_t j = 0; j < d; ++j) {
                xv(i, j) = x.node(i)[j];
                yv(i, j) = y.node(i)[j];
            }
        }
        return py::make_tuple(to_array(t), xs, ys);
    }, py::arg("config"), py::arg("seed") = py::none(), py::arg("path") = 0,
       "One coupled pair (t, x, y) driven by a shared Brownian path.");

    m.def("strong_order", [](double a1, double b1, const std::vector<double>& h, std::size_t paths,
                             std::uint64_t seed, double horizon, std::size_t threads) {
        StrongOrderSetup setup;
        setup.a1 = a1;
        setup.b1 = b1;
        setup.horizon = horizon;
        MonteCarloOptions mc;
        mc.threads = threads;
        StrongOrderResult r;
        {
            py::gil_scoped_release release;
            r = strong_error_slope(setup, h, paths, seed, mc);
        }
        py::dict out;
        out["h"] = to_array(r.h);
        out["rms_error"] = to_array(r.rms_error);
        out["slope"] = r.slope;
        return out;
    }, py::arg("a1"), py::arg("b1"), py::arg("h"), py::arg("paths"), py::arg("seed") = 0,
       py::arg("horizon") = 1.0, py::arg("threads") = 1);

    m.def("exact_second_moment", [](double a1, double b1, double h, std::size_t steps,
                                    double x0) {
        return to_array(exact_second_moment_scalar_linear(a1, b1, h, steps, x0));
    }, py::arg("a1"), py::arg("b1"), py::arg("h"), py::arg("steps"), py::arg("x0") = 1.0);
}
