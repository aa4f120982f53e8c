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

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sddestab/delay.hpp"
#include "sddestab/initial.hpp"
#include "sddestab/problem.hpp"

namespace sddestab {

using ParamMap = std::map<std::string, std::vector<double>>;

struct ProblemRegistryEntry {
    std::string name;
    std::string description;
    // Keys accepted under `problem.`; all optional, missing ones default to 0
    // (the nonlinear cubic coefficient defaults to -1, linear d to 1).
    std::vector<std::string> keys;
    // Whether the family reads the delay section.
    bool uses_delays = true;
    std::function<ProblemSpec(const ParamMap&, std::vector<DelaySpec>, InitialSegment, double,
                              double)>
        build;
};

const std::vector<ProblemRegistryEntry>& problem_registry();

// nullptr when unknown.
const ProblemRegistryEntry* find_problem(std::string_view name);

}  // namespace sddestab
