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

/* C interface to the metasense library. All functions are thread safe for distinct handles. */

#ifndef METASENSE_H
#define METASENSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(METASENSE_BUILD)
#define MS_API __declspec(dllexport)
#else
#define MS_API __declspec(dllimport)
#endif
#else
#define MS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C"
{
#endif

    typedef enum ms_status
    {
        MS_OK = 0,
        MS_ERR_ARGUMENT = 1,
        MS_ERR_CONFIG = 2,
        MS_ERR_ESTIMATION = 3,
        MS_ERR_IO = 4,
        MS_ERR_INTERNAL = 5
    } ms_status;

    typedef enum ms_command
    {
        MS_CMD_VALIDATE = 0,
        MS_CMD_SIMULATE = 1,
        MS_CMD_BRUTE = 2,
        MS_CMD_SPARSE = 3,
        MS_CMD_COHERENCE = 4,
        MS_CMD_MONTECARLO = 5
    } ms_command;

    typedef enum ms_sweep
    {
        MS_SWEEP_NONE = 0,
        MS_SWEEP_SNR = 1,
        MS_SWEEP_BANDWIDTH = 2
    } ms_sweep;

    /* Opaque handles. */
    typedef struct ms_scenario ms_scenario;
    typedef struct ms_report ms_report;

    MS_API const char *ms_version(void);
    MS_API const char *ms_status_string(ms_status status);

    /* Message of the last failing call on the calling thread ("" if none). */
    MS_API const char *ms_last_error(void);

    MS_API ms_status ms_scenario_load(const char *path, ms_scenario **out);
    MS_API ms_status ms_scenario_parse(const char *json_text, ms_scenario **out);
    MS_API void ms_scenario_free(ms_scenario *scenario);

    /* Overrides; each re-validates the scenario. */
    MS_API ms_status ms_scenario_set_seed(ms_scenario *scenario, uint64_t seed);
    MS_API ms_status ms_scenario_set_threads(ms_scenario *scenario, int threads);
    MS_API ms_status ms_scenario_set_snr_db(ms_scenario *scenario, double snr_db); /* INFINITY disables noise */
    MS_API ms_status ms_scenario_set_output_dir(ms_scenario *scenario, const char *directory);
    MS_API ms_status ms_scenario_set_bandwidths(ms_scenario *scenario, const double *bandwidths_hz, size_t count);
    MS_API ms_status ms_scenario_set_trials(ms_scenario *scenario, int trials);
    MS_API ms_status ms_scenario_set_sweep(ms_scenario *scenario, ms_sweep sweep, const double *values, size_t count);

    /* 16 hex digits, owned by the scenario. */
    MS_API const char *ms_scenario_hash(const ms_scenario *scenario);
    MS_API uint64_t ms_scenario_seed(const ms_scenario *scenario);
    MS_API size_t ms_scenario_warning_count(const ms_scenario *scenario);
    MS_API const char *ms_scenario_warning(const ms_scenario *scenario, size_t index);

    /* Runs a command. On MS_OK and MS_ERR_ESTIMATION a report is returned (outputs may be partial). */
    MS_API ms_status ms_run(ms_scenario *scenario, ms_command command, ms_report **report);

    MS_API const char *ms_report_text(const ms_report *report);
    MS_API size_t ms_report_file_count(const ms_report *report);
    MS_API const char *ms_report_file(const ms_report *report, size_t index);
    MS_API void ms_report_free(ms_report *report);

#ifdef __cplusplus
}
#endif

#endif
