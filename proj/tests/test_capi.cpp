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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

namespace
{
    const char *kScene = R"({ "targets": [ { "theta_deg": 40.0, "s1_m": 2.41 } ],
                               "surfaces": { "elements": 64 },
                               "estimation": { "angle_step_deg": 1.0 } })";
}

TEST_SUITE("capi")
{
    TEST_CASE("version and status strings")
    {
        CHECK(std::string(ms_version()) == "0.1.0");
        CHECK(std::string(ms_status_string(MS_OK)) == "ok");
        CHECK(std::string(ms_status_string(MS_ERR_CONFIG)).size() > 0);
        CHECK(ms_status_string(static_cast<ms_status>(99)) != nullptr);
    }

    TEST_CASE("null arguments are rejected")
    {
        ms_scenario *s = nullptr;
        CHECK(ms_scenario_parse(nullptr, &s) == MS_ERR_ARGUMENT);
        CHECK(ms_scenario_parse(kScene, nullptr) == MS_ERR_ARGUMENT);
        CHECK(std::string(ms_last_error()).size() > 0);
        CHECK(ms_scenario_set_seed(nullptr, 1) == MS_ERR_ARGUMENT);
        CHECK(ms_run(nullptr, MS_CMD_VALIDATE, nullptr) == MS_ERR_ARGUMENT);
        CHECK(std::string(ms_scenario_hash(nullptr)).empty());
        CHECK(std::string(ms_report_text(nullptr)).empty());
        CHECK(ms_report_file_count(nullptr) == 0);
        ms_scenario_free(nullptr);
        ms_report_free(nullptr);
    }

    TEST_CASE("configuration errors carry the message")
    {
        ms_scenario *s = nullptr;
        CHECK(ms_scenario_parse("{ \"targets\": 3 }", &s) == MS_ERR_CONFIG);
        CHECK(s == nullptr);
        CHECK(std::string(ms_last_error()).find("/targets") != std::string::npos);
        CHECK(ms_scenario_load("/nonexistent/metasense.json", &s) == MS_ERR_IO);
    }

    TEST_CASE("overrides revalidate and leave the scenario unchanged on failure")
    {
        ms_scenario *s = nullptr;
        REQUIRE(ms_scenario_parse(kScene, &s) == MS_OK);
        const std::string hash = ms_scenario_hash(s);
        CHECK(hash.size() == 16);
        CHECK(ms_scenario_warning_count(s) == 0);
        CHECK(ms_scenario_warning(s, 0) == nullptr);

        CHECK(ms_scenario_set_seed(s, 42) == MS_OK);
        CHECK(ms_scenario_seed(s) == 42);
        const std::string seeded = ms_scenario_hash(s);
        CHECK(ms_scenario_set_threads(s, 0) != MS_OK);
        CHECK(ms_scenario_set_trials(s, 0) == MS_ERR_ARGUMENT);
        const double bad[] = {-1.0};
        CHECK(ms_scenario_set_bandwidths(s, bad, 1) == MS_ERR_CONFIG);
        CHECK(ms_scenario_set_bandwidths(s, nullptr, 1) == MS_ERR_ARGUMENT);
        CHECK(ms_scenario_set_snr_db(s, NAN) != MS_OK);
        CHECK(std::string(ms_scenario_hash(s)) == seeded);
        CHECK(ms_scenario_seed(s) == 42);
        CHECK(ms_scenario_set_snr_db(s, INFINITY) == MS_OK);
        const double snrs[] = {0.0, 10.0};
        CHECK(ms_scenario_set_sweep(s, MS_SWEEP_SNR, snrs, 2) == MS_OK);
        CHECK(std::string(ms_scenario_hash(s)) != hash);
        ms_scenario_free(s);
    }

    TEST_CASE("run returns a report listing written files")
    {
        const std::filesystem::path dir = std::filesystem::path(METASENSE_TEST_TMP) / "capi";
        std::filesystem::remove_all(dir);
        ms_scenario *s = nullptr;
        REQUIRE(ms_scenario_parse(kScene, &s) == MS_OK);
        REQUIRE(ms_scenario_set_output_dir(s, dir.c_str()) == MS_OK);

        ms_report *r = nullptr;
        REQUIRE(ms_run(s, MS_CMD_VALIDATE, &r) == MS_OK);
        CHECK(std::string(ms_report_text(r)).size() > 0);
        CHECK(ms_report_file_count(r) == 0);
        ms_report_free(r);

        r = nullptr;
        REQUIRE(ms_run(s, MS_CMD_SPARSE, &r) == MS_OK);
        REQUIRE(ms_report_file_count(r) == 3);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(std::filesystem::exists(ms_report_file(r, i)));
        CHECK(ms_report_file(r, 3) == nullptr);
        ms_report_free(r);

        CHECK(ms_run(s, static_cast<ms_command>(17), &r) == MS_ERR_ARGUMENT);
        ms_scenario_free(s);
    }
}
