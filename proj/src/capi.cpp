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

#include "metasense/metasense.h"
#include "metasense/errors.hpp"
#include "metasense/experiments.hpp"

#include <exception>
#include <new>
#include <string>

struct ms_scenario
{
    metasense::ScenarioConfig config;
    std::string hash;
};

struct ms_report
{
    metasense::CommandResult result;
};

namespace
{
    thread_local std::string last_error;

    ms_status set_error(ms_status status, const std::string &message)
    {
        last_error = message;
        return status;
    }

    // Maps library exceptions to status codes.
    template <typename Body>
    ms_status guarded(Body &&body)
    {
        try
        {
            last_error.clear();
            return body();
        }
        catch (const metasense::ConfigError &e)
        {
            return set_error(MS_ERR_CONFIG, e.what());
        }
        catch (const metasense::GeometryError &e)
        {
            return set_error(MS_ERR_CONFIG, e.what());
        }
        catch (const metasense::InfeasibleRangeError &e)
        {
            return set_error(MS_ERR_ESTIMATION, e.what());
        }
        catch (const metasense::EstimationError &e)
        {
            return set_error(MS_ERR_ESTIMATION, e.what());
        }
        catch (const metasense::IoError &e)
        {
            return set_error(MS_ERR_IO, e.what());
        }
        catch (const std::bad_alloc &)
        {
            return set_error(MS_ERR_INTERNAL, "out of memory");
        }
        catch (const std::exception &e)
        {
            return set_error(MS_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return set_error(MS_ERR_INTERNAL, "unknown error");
        }
    }

    // Applies `change` to a copy and commits it only if the result still validates.
    template <typename Change>
    ms_status modify(ms_scenario *scenario, Change &&change)
    {
        if (scenario == nullptr)
            return set_error(MS_ERR_ARGUMENT, "scenario handle is null");
        return guarded([&] {
            metasense::ScenarioConfig next = scenario->config;
            change(next);
            metasense::validate_config(next);
            scenario->config = std::move(next);
            scenario->hash = metasense::config_hash(scenario->config);
            return MS_OK;
        });
    }

    ms_status adopt(metasense::ScenarioConfig config, ms_scenario **out)
    {
        auto *s = new ms_scenario{std::move(config), {}};
        s->hash = metasense::config_hash(s->config);
        *out = s;
        return MS_OK;
    }
}

extern "C"
{
    const char *ms_version(void) { return "0.1.0"; }

    const char *ms_status_string(ms_status status)
    {
        switch (status)
        {
        case MS_OK:
            return "ok";
        case MS_ERR_ARGUMENT:
            return "invalid argument";
        case MS_ERR_CONFIG:
            return "configuration error";
        case MS_ERR_ESTIMATION:
            return "estimation failure";
        case MS_ERR_IO:
            return "i/o error";
        case MS_ERR_INTERNAL:
            return "internal error";
        }
        return "unknown status";
    }

    const char *ms_last_error(void) { return last_error.c_str(); }

    ms_status ms_scenario_load(const char *path, ms_scenario **out)
    {
        if (path == nullptr || out == nullptr)
            return set_error(MS_ERR_ARGUMENT, "path and output handle are required");
        *out = nullptr;
        return guarded([&] { return adopt(metasense::load_config(path), out); });
    }

    ms_status ms_scenario_parse(const char *json_text, ms_scenario **out)
    {
        if (json_text == nullptr || out == nullptr)
            return set_error(MS_ERR_ARGUMENT, "text and output handle are required");
        *out = nullptr;
        return guarded([&] { return adopt(metasense::parse_config(json_text), out); });
    }

    void ms_scenario_free(ms_scenario *scenario) { delete scenario; }

    ms_status ms_scenario_set_seed(ms_scenario *scenario, uint64_t seed)
    {
        return modify(scenario, [&](metasense::ScenarioConfig &c) { c.noise.seed = seed; });
    }

    ms_status ms_scenario_set_threads(ms_scenario *scenario, int threads)
    {
        return modify(scenario, [&](metasense::ScenarioConfig &c) { c.threads = threads; });
    }

    ms_status ms_scenario_set_snr_db(ms_scenario *scenario, double snr_db)
    {
        return modify(scenario, [&](metasense::ScenarioConfig &c) { c.noise.snr_db = snr_db; });
    }

    ms_status ms_scenario_set_output_dir(ms_scenario *scenario, const char *directory)
    {
        if (directory == nullptr || *directory == '\0')
            return set_error(MS_ERR_ARGUMENT, "output directory is empty");
        return modify(scenario, [&](metasense::ScenarioConfig &c) { c.output_dir = directory; });
    }

    ms_status ms_scenario_set_bandwidths(ms_scenario *scenario, const double *bandwidths_hz, size_t count)
    {
        if (bandwidths_hz == nullptr && count > 0)
            return set_error(MS_ERR_ARGUMENT, "bandwidth array is null");
        return modify(scenario, [&](metasense::ScenarioConfig &c) {
            c.coherence.bandwidths_hz.assign(bandwidths_hz, bandwidths_hz + count);
        });
    }

    ms_status ms_scenario_set_trials(ms_scenario *scenario, int trials)
    {
        if (trials < 1)
            return set_error(MS_ERR_ARGUMENT, "trials must be at least 1");
        return modify(scenario, [&](metasense::ScenarioConfig &c) { c.montecarlo.trials = trials; });
    }

    ms_status ms_scenario_set_sweep(ms_scenario *scenario, ms_sweep sweep, const double *values, size_t count)
    {
        if (values == nullptr && count > 0)
            return set_error(MS_ERR_ARGUMENT, "value array is null");
        if (sweep != MS_SWEEP_NONE && sweep != MS_SWEEP_SNR && sweep != MS_SWEEP_BANDWIDTH)
            return set_error(MS_ERR_ARGUMENT, "unknown sweep kind");
        return modify(scenario, [&](metasense::ScenarioConfig &c) {
            c.montecarlo.sweep = sweep == MS_SWEEP_SNR         ? metasense::SweepKind::Snr
                                 : sweep == MS_SWEEP_BANDWIDTH ? metasense::SweepKind::Bandwidth
                                                               : metasense::SweepKind::None;
            if (count > 0 || sweep == MS_SWEEP_NONE)
                c.montecarlo.values.assign(values, values + count);
        });
    }

    const char *ms_scenario_hash(const ms_scenario *scenario) { return scenario ? scenario->hash.c_str() : ""; }

    uint64_t ms_scenario_seed(const ms_scenario *scenario) { return scenario ? scenario->config.noise.seed : 0; }

    size_t ms_scenario_warning_count(const ms_scenario *scenario)
    {
        return scenario ? scenario->config.warnings.size() : 0;
    }

    const char *ms_scenario_warning(const ms_scenario *scenario, size_t index)
    {
        if (scenario == nullptr || index >= scenario->config.warnings.size())
            return nullptr;
        return scenario->config.warnings[index].c_str();
    }

    ms_status ms_run(ms_scenario *scenario, ms_command command, ms_report **report)
    {
        if (scenario == nullptr || report == nullptr)
            return set_error(MS_ERR_ARGUMENT, "scenario and report handles are required");
        *report = nullptr;
        return guarded([&] {
            metasense::CommandResult result;
            switch (command)
            {
            case MS_CMD_VALIDATE:
                result = metasense::cmd_validate(scenario->config);
                break;
            case MS_CMD_SIMULATE:
                result = metasense::cmd_simulate(scenario->config);
                break;
            case MS_CMD_BRUTE:
                result = metasense::cmd_brute(scenario->config);
                break;
            case MS_CMD_SPARSE:
                result = metasense::cmd_sparse(scenario->config);
                break;
            case MS_CMD_COHERENCE:
                result = metasense::cmd_coherence(scenario->config);
                break;
            case MS_CMD_MONTECARLO:
                result = metasense::cmd_montecarlo(scenario->config);
                break;
            default:
                return set_error(MS_ERR_ARGUMENT, "unknown command");
            }
            const ms_status status = result.status == 0 ? MS_OK : MS_ERR_ESTIMATION;
            if (status != MS_OK)
                last_error = result.report;
            *report = new ms_report{std::move(result)};
            return status;
        });
    }

    const char *ms_report_text(const ms_report *report) { return report ? report->result.report.c_str() : ""; }

    size_t ms_report_file_count(const ms_report *report) { return report ? report->result.files.size() : 0; }

    const char *ms_report_file(const ms_report *report, size_t index)
    {
        if (report == nullptr || index >= report->result.files.size())
            return nullptr;
        return report->result.files[index].c_str();
    }

    void ms_report_free(ms_report *report) { delete report; }
}
