# Copyright 2026 The sddestab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Stochastic delay equations: backward Euler simulation, mean-square
stability and contractivity certificates, Monte Carlo bound checks."""

from ._core import (
    CertificationError,
    CoefficientSet,
    Config,
    ConfigError,
    Delay,
    DomainError,
    Error,
    ParameterError,
    StepError,
    StepsizeError,
    asymptotic_certificate,
    certify,
    contraction_constant,
    discrete_constants,
    estimate_deviation,
    exact_second_moment,
    load_config,
    max_stepsize,
    node_sequence,
    parse_config,
    problems,
    run_deviation,
    scalar_linear_criterion,
    sigma_rho,
    simulate,
    strong_order,
)

__version__ = "0.1.0"
