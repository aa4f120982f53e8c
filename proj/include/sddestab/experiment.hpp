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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "sddestab/analysis.hpp"
#include "sddestab/config.hpp"
#include "sddestab/integrator.hpp"
#include "sddestab/montecarlo.hpp"

namespace sddestab {

/// Parses a pair.xi / pair.eta value: "constant v...", "poly c0 c1 ...",
/// "sin offset amplitude omega phase". Scalars broadcast over components.
InitialSegment parse_initial(std::string_view text, std::size_t dimension, double a,
                             double tau_max);

struct Experiment {
    ProblemSpec problem;
    InitialSegment xi;
    InitialSegment eta;
    Grid grid{0.0, 1.0, 1};
};

/// Builds the registered problem, the initial pair and the grid. The
/// problem must pass validate_problem with config.probes samples.
Experiment build_experiment(const ExperimentConfig& config);

struct CertificateReport {
    StabilityCertificate certificate;
    double h = 0.0;
    std::optional<NodeSequence> nodes;  // when asymptotically contractive

    std::string text() const;     // human-readable
    std::string machine() const;  // key=value lines
};

CertificateReport run_certify(const ExperimentConfig& config);

struct RunOptions {
    std::size_t threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

struct DeviationOutcome {
    MsDeviationSeries series;
    BoundReport bound;
    std::string envelope;  // "finite" or "asymptotic"
    double runtime_seconds = 0.0;
    std::filesystem::path directory;

    int exit_status() const { return bound.violations == 0 ? 0 : 1; }
};

/// Certifies, simulates the coupled pair and writes deviation.csv,
/// certificate.txt and summary.txt.
DeviationOutcome run_experiment(const ExperimentConfig& config, const RunOptions& options,
                                std::ostream& log);

/// Writes trajectory.csv for the pair driven by path 0.
std::filesystem::path run_simulate(const ExperimentConfig& config, const RunOptions& options);

/// Strong-order study on dx = A1 x dt + B1 x dw; writes order.csv.
StrongOrderResult run_order(const ExperimentConfig& config, const RunOptions& options,
                            std::ostream& log);

std::string format_deviation_csv(const MsDeviationSeries& series);
std::string format_number(double value);

}  // namespace sddestab
