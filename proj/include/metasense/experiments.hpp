// SPDX-License-Identifier: Apache-2.0
//
// metasense: single-antenna THz radar angle estimation with metasurface pairs
// Copyright (C) 2026 The metasense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef METASENSE_EXPERIMENTS_HPP
#define METASENSE_EXPERIMENTS_HPP

#include "metasense/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace metasense
{
    // Exit status of a command: 0 success, 3 estimation failure (outputs are still written).
    struct CommandResult
    {
        int status = 0;
        std::string report;             // human readable summary
        std::vector<std::string> files; // CSVs written, in order
    };

    // Every CSV starts with "# key=value" comment lines carrying the command, config hash and seed,
    // followed by one header row. Numbers are printed with %.17g; no timestamps are written.
    CommandResult cmd_validate(const ScenarioConfig &config);
    CommandResult cmd_simulate(const ScenarioConfig &config);
    CommandResult cmd_brute(const ScenarioConfig &config);
    CommandResult cmd_sparse(const ScenarioConfig &config);
    CommandResult cmd_coherence(const ScenarioConfig &config);
    CommandResult cmd_montecarlo(const ScenarioConfig &config);

    struct TrialOutcome
    {
        std::uint64_t seed = 0;
        bool success = false;
        std::vector<double> true_deg;
        std::vector<double> estimated_deg; // NaN where the estimator returned nothing
        std::vector<double> rcs;
    };

    struct SweepPoint
    {
        double value = 0.0; // swept snr [dB] or bandwidth [Hz]
        int trials = 0;
        int successes = 0;
        double success_rate = 0.0;
        double rmse_deg = 0.0;             // over all returned estimates
        double median_abs_error_deg = 0.0; // over all returned estimates
        std::vector<TrialOutcome> outcomes;
    };

    // Trial t uses seed config.noise.seed + t. A trial succeeds when every target angle is recovered
    // within one angle-grid step. Trials run in parallel on config.threads workers.
    std::vector<SweepPoint> monte_carlo(const ScenarioConfig &config);
}

#endif
