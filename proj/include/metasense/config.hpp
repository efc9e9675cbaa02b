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

#ifndef METASENSE_CONFIG_HPP
#define METASENSE_CONFIG_HPP

#include "metasense/estimate.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace metasense
{
    struct SurfaceConfig
    {
        int elements = 256;
        std::optional<double> spacing_m;              // default lambda_c / 2
        std::array<double, 2> steer_deg{15.0, 75.0};
        std::optional<double> design_frequency_hz;    // default: carrier
        std::array<double, 2> weights{1.0, 1.0};
    };

    // Either polar (theta from the axis at the midpoint, distance from the midpoint) or cartesian.
    struct TargetConfig
    {
        bool polar = true;
        double theta_deg = 90.0;
        double s1_m = 1.0;
        Point2 position;
        double rcs = 1.0;
    };

    struct EstimationConfig
    {
        double angle_step_deg = 0.5;
        Solver solver = Solver::Lasso;
        PipelineMode pipeline = PipelineMode::Joint;
        double lambda_fraction = 0.1;
        std::optional<double> lambda;
        int max_iter = 5000;
        double tol = 1e-10;
        int supports_per_range = 1;
        std::uint64_t brute_budget = 10'000'000;
        bool amplitude_refit = false;
        RangeRoot range_root = RangeRoot::Near;
    };

    struct CoherenceConfig
    {
        std::optional<double> range_m; // default: range of the first target
        std::vector<double> bandwidths_hz{10e9, 20e9, 30e9, 40e9, 50e9, 60e9};
        double db_down = 3.0;
    };

    enum class SweepKind
    {
        None,
        Snr,
        Bandwidth
    };

    enum class TrialEstimator
    {
        Sparse,
        Brute
    };

    struct MonteCarloConfig
    {
        int trials = 50;
        SweepKind sweep = SweepKind::None;
        std::vector<double> values;
        bool random_rcs = false; // sigma ~ U(0, 1] per target and trial
        TrialEstimator estimator = TrialEstimator::Sparse;
    };

    // One file fully determines an experiment.
    struct ScenarioConfig
    {
        WaveformSpec waveform;
        Point2 radar{0.0, 4.0};
        Point2 surface1{-0.1, 0.0};
        Point2 surface2{0.1, 0.0};
        SurfaceConfig surfaces;
        std::vector<TargetConfig> targets;
        NoiseSpec noise{20.0, 1};
        EstimationConfig estimation;
        CoherenceConfig coherence;
        MonteCarloConfig montecarlo;
        std::string output_dir = "out";
        int threads = 1;
        std::vector<std::string> warnings; // non-fatal findings from validation
    };

    // Parses and validates. Errors are ConfigError with "source:line: /json/pointer: message".
    // Unknown keys are rejected.
    ScenarioConfig parse_config(const std::string &text, const std::string &source = "<config>");
    ScenarioConfig load_config(const std::string &path);

    // Re-runs every module-level check on an already built config (after CLI overrides).
    void validate_config(ScenarioConfig &config);

    // Canonical JSON (defaults resolved, fixed key order). Excludes output directory and threads.
    std::string canonical_json(const ScenarioConfig &config);

    // FNV-1a 64 of canonical_json, as 16 lower-case hex digits.
    std::string config_hash(const ScenarioConfig &config);

    // Built objects.
    SceneGeometry make_scene(const ScenarioConfig &config);
    SurfacePair make_surfaces(const ScenarioConfig &config);
    ForwardModel make_model(const ScenarioConfig &config);
    std::vector<Target> make_targets(const ScenarioConfig &config, const SceneGeometry &scene);
    PipelineConfig make_pipeline_config(const ScenarioConfig &config);
    BruteForceOptions make_brute_options(const ScenarioConfig &config);
}

#endif
