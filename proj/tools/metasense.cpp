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

// metasense command-line tool.
//
//   metasense validate   --config configs/three_targets.json
//   metasense simulate   --config ... --seed 7 --snr-db inf --out run1
//   metasense brute      --config configs/two_targets_brute.json
//   metasense sparse     --config configs/three_targets.json
//   metasense coherence  --config configs/coherence_256el_60ghz.json --bandwidths 10e9,60e9
//   metasense montecarlo --config ... --trials 50 --sweep snr --values 0,10,20,inf
//
// Exit codes: 0 success, 2 configuration or usage error, 3 estimation failure,
// 4 i/o error, 5 internal error.

#include "metasense/metasense.h"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace
{
    struct Options
    {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
        std::optional<int> threads;
        std::string snr_db;
        std::vector<double> bandwidths;
        std::optional<int> trials;
        std::string sweep;
        std::vector<std::string> values;
    };

    double parse_number(const std::string &text, const char *what)
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(text, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used != text.size() || text.empty())
            throw CLI::ValidationError(what, "'" + text + "' is not a number");
        return v;
    }

    int fail(ms_status status)
    {
        std::fprintf(stderr, "metasense: %s: %s\n", ms_status_string(status), ms_last_error());
        return static_cast<int>(status);
    }

    int run(const Options &opt, ms_command command)
    {
        ms_scenario *scenario = nullptr;
        ms_status status = ms_scenario_load(opt.config.c_str(), &scenario);
        if (status != MS_OK)
            return fail(status);

        struct Guard
        {
            ms_scenario *s;
            ~Guard() { ms_scenario_free(s); }
        } guard{scenario};

        if (!opt.out.empty() && (status = ms_scenario_set_output_dir(scenario, opt.out.c_str())) != MS_OK)
            return fail(status);
        if (opt.seed && (status = ms_scenario_set_seed(scenario, *opt.seed)) != MS_OK)
            return fail(status);
        if (opt.threads && (status = ms_scenario_set_threads(scenario, *opt.threads)) != MS_OK)
            return fail(status);
        if (!opt.snr_db.empty() &&
            (status = ms_scenario_set_snr_db(scenario, parse_number(opt.snr_db, "--snr-db"))) != MS_OK)
            return fail(status);
        if (!opt.bandwidths.empty() &&
            (status = ms_scenario_set_bandwidths(scenario, opt.bandwidths.data(), opt.bandwidths.size())) != MS_OK)
            return fail(status);
        if (opt.trials && (status = ms_scenario_set_trials(scenario, *opt.trials)) != MS_OK)
            return fail(status);
        if (!opt.sweep.empty() || !opt.values.empty())
        {
            std::vector<double> values;
            for (const std::string &v : opt.values)
                values.push_back(parse_number(v, "--values"));
            const ms_sweep kind = opt.sweep == "snr"         ? MS_SWEEP_SNR
                                  : opt.sweep == "bandwidth" ? MS_SWEEP_BANDWIDTH
                                  : opt.sweep == "none"      ? MS_SWEEP_NONE
                                                             : static_cast<ms_sweep>(-1);
            if (opt.sweep.empty())
            {
                std::fprintf(stderr, "metasense: --values needs --sweep\n");
                return MS_ERR_CONFIG;
            }
            if ((status = ms_scenario_set_sweep(scenario, kind, values.data(), values.size())) != MS_OK)
                return fail(status);
        }

        // validate lists the warnings in its report
        if (command != MS_CMD_VALIDATE)
            for (std::size_t i = 0; i < ms_scenario_warning_count(scenario); ++i)
                std::fprintf(stderr, "warning: %s\n", ms_scenario_warning(scenario, i));

        ms_report *report = nullptr;
        status = ms_run(scenario, command, &report);
        if (report != nullptr)
        {
            std::fputs(ms_report_text(report), stdout);
            for (std::size_t i = 0; i < ms_report_file_count(report); ++i)
                std::printf("wrote %s\n", ms_report_file(report, i));
            ms_report_free(report);
        }
        if (status != MS_OK)
            return fail(status);
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Single-antenna THz radar angle estimation with metasurface pairs"};
    app.set_version_flag("--version", std::string(ms_version()));
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("-c,--config", opt.config, "Scenario file (JSON)")->check(CLI::ExistingFile);
    app.add_option("-o,--out", opt.out, "Output directory (overrides output.directory)");
    app.add_option("--seed", opt.seed, "Noise seed (overrides noise.seed)");
    app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--snr-db", opt.snr_db, "SNR in dB, or inf for noise-free");

    struct Entry
    {
        const char *name;
        const char *help;
        ms_command command;
    };
    const Entry entries[] = {
        {"validate", "Parse and validate a scenario, print derived quantities", MS_CMD_VALIDATE},
        {"simulate", "Synthesize one measurement (measurement.csv)", MS_CMD_SIMULATE},
        {"brute", "Exhaustive angle search (brute_loss.csv, brute_result.csv)", MS_CMD_BRUTE},
        {"sparse", "Per-range sparse reconstruction (sparse_*.csv)", MS_CMD_SPARSE},
        {"coherence", "Sensing matrices and coherence across bandwidths (coherence_*.csv)", MS_CMD_COHERENCE},
        {"montecarlo", "Seeded trials with an optional snr or bandwidth sweep (montecarlo*.csv)", MS_CMD_MONTECARLO},
    };

    ms_command selected = MS_CMD_VALIDATE;
    for (const Entry &e : entries)
    {
        CLI::App *sub = app.add_subcommand(e.name, e.help);
        sub->callback([&selected, command = e.command] { selected = command; });
        if (e.command == MS_CMD_COHERENCE)
            sub->add_option("--bandwidths", opt.bandwidths, "Chirp bandwidths [Hz]")->delimiter(',');
        if (e.command == MS_CMD_MONTECARLO)
        {
            sub->add_option("--trials", opt.trials, "Trials per sweep point")->check(CLI::PositiveNumber);
            sub->add_option("--sweep", opt.sweep, "Swept variable")->check(CLI::IsMember({"none", "snr", "bandwidth"}));
            sub->add_option("--values", opt.values, "Sweep values (dB or Hz; inf allowed for snr)")->delimiter(',');
        }
    }

    try
    {
        app.parse(argc, argv);
        if (opt.config.empty())
            throw CLI::RequiredError("--config");
        return run(opt, selected);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return MS_ERR_CONFIG;
    }
}
