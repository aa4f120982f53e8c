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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sddestab/experiment.hpp"

namespace {

enum Exit : int { kOk = 0, kViolations = 1, kConfig = 2, kRuntime = 3 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backward Euler simulation and mean-square stability checks for SDDEs"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::string out;
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides mc.seed)");
    app.add_option("--threads", threads, "worker threads; results do not depend on it")
        ->check(CLI::PositiveNumber);
    auto* out_opt = app.add_option("--out", out, "output directory (overrides output.dir)");

    std::string config_path;
    auto* certify = app.add_subcommand("certify", "print the stability certificate");
    auto* simulate = app.add_subcommand("simulate", "write one coupled trajectory pair");
    auto* deviation = app.add_subcommand("deviation", "Monte Carlo check of the deviation bound");
    auto* order = app.add_subcommand("order", "strong-order study on the gbm problem");
    for (auto* sub : {certify, simulate, deviation, order}) {
        sub->add_option("config", config_path, "config file")->required();
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    sddestab::RunOptions options;
    options.threads = threads;
    if (seed_opt->count()) options.seed = seed;
    if (out_opt->count()) options.out = out;

    try {
        const sddestab::ExperimentConfig config = sddestab::load_config(config_path);
        if (certify->parsed()) {
            const auto report = sddestab::run_certify(config);
            std::cout << report.text() << "\n" << report.machine();
            return kOk;
        }
        if (simulate->parsed()) {
            std::cout << "wrote " << sddestab::run_simulate(config, options).string() << "\n";
            return kOk;
        }
        if (deviation->parsed()) {
            const auto outcome = sddestab::run_experiment(config, options, std::cout);
            return outcome.exit_status() == 0 ? kOk : kViolations;
        }
        sddestab::run_order(config, options, std::cout);
        return kOk;
    } catch (const sddestab::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& m : e.messages()) std::cerr << "  " << m << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}
