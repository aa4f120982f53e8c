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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sddestab/types.hpp"

namespace sddestab {

/// Every problem found while reading a config, with line numbers.
class ConfigError : public Error {
  public:
    explicit ConfigError(std::vector<std::string> messages);
    const std::vector<std::string>& messages() const { return messages_; }

  private:
    std::vector<std::string> messages_;
};

struct DelayConfig {
    std::vector<std::string> kinds{"constant"};
    std::vector<double> tau{1.0};
    std::vector<double> q;
    std::vector<double> shift;
    std::vector<double> table_t;
    std::vector<double> table_tau;
    double tau_max = -1.0;  // < 0: derived from the delays
};

struct ExperimentConfig {
    std::string problem;
    // problem.<key> lists, e.g. "A2" -> {1.0, 0.5}
    std::map<std::string, std::vector<double>> params;
    DelayConfig delay;
    double a = 0.0;
    double b = 1.0;
    std::size_t steps = 1;
    std::size_t paths = 1;
    std::uint64_t seed = 0;
    std::string xi = "constant 1";
    std::string eta = "constant 0.5";
    double c0 = 0.5;
    double mu = 1.0;
    double slack = 3.0;
    std::size_t probes = 1000;
    std::string envelope = "auto";  // auto | finite | asymptotic
    std::vector<double> extra_steps;
    std::vector<double> order_steps{0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625,
                                    0.001953125};
    std::string output_dir = ".";
};

/// Parses `section.key = value` lines ('#' starts a comment). Unknown,
/// duplicate, malformed and missing keys all end up in one ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace sddestab
