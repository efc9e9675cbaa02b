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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace
{
    const std::string kCli = METASENSE_CLI;
    const std::string kConfigs = std::string(METASENSE_SOURCE_DIR) + "/configs/";

    fs::path scratch(const std::string &name)
    {
        const fs::path dir = fs::path(METASENSE_TEST_TMP) / "cli" / name;
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    }

    int run(const std::string &args)
    {
        const int raw = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    }

    std::string slurp(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    struct Table
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        std::size_t column(const std::string &name) const
        {
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name)
                    return i;
            FAIL("missing column " << name);
            return 0;
        }
        double number(std::size_t row, const std::string &name) const
        {
            return std::stod(rows.at(row).at(column(name)));
        }
    };

    std::vector<std::string> split(const std::string &line)
    {
        std::vector<std::string> out;
        std::stringstream s(line);
        std::string cell;
        while (std::getline(s, cell, ','))
            out.push_back(cell);
        return out;
    }

    Table read_csv(const fs::path &path)
    {
        std::ifstream in(path);
        REQUIRE(in.good());
        Table t;
        std::string line;
        while (std::getline(in, line))
        {
            if (line.empty() || line[0] == '#')
                continue;
            if (t.header.empty())
                t.header = split(line);
            else
                t.rows.push_back(split(line));
        }
        return t;
    }
}

TEST_SUITE("cli")
{
    TEST_CASE("validate succeeds on the presets")
    {
        for (const char *name : {"three_targets", "two_targets_brute", "coherence_4el_10ghz", "coherence_256el_10ghz",
                                 "coherence_256el_60ghz"})
            CHECK(run("validate -c " + kConfigs + name + ".json") == 0);
    }

    TEST_CASE("simulate is deterministic and honours overrides")
    {
        const fs::path a = scratch("sim_a"), b = scratch("sim_b"), c = scratch("sim_c");
        REQUIRE(run("simulate -c " + kConfigs + "three_targets.json -o " + a.string() + " --seed 7") == 0);
        REQUIRE(run("simulate -c " + kConfigs + "three_targets.json -o " + b.string() + " --seed 7 --threads 3") == 0);
        CHECK(slurp(a / "measurement.csv") == slurp(b / "measurement.csv"));

        REQUIRE(run("simulate -c " + kConfigs + "three_targets.json -o " + c.string() + " --seed 7 --snr-db inf") == 0);
        const Table t = read_csv(c / "measurement.csv");
        CHECK(t.rows.size() == 128);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
        {
            CHECK(t.number(i, "re_y") == t.number(i, "re_noise_free"));
            CHECK(t.number(i, "im_y") == t.number(i, "im_noise_free"));
        }
        const Table noisy = read_csv(a / "measurement.csv");
        CHECK(noisy.rows.size() == 128);
        CHECK(noisy.number(0, "re_y") != noisy.number(0, "re_noise_free"));
        CHECK(slurp(a / "measurement.csv").find("# seed=7") != std::string::npos);
    }

    TEST_CASE("a single Monte-Carlo trial reproduces sparse")
    {
        const fs::path s = scratch("mc_sparse"), m = scratch("mc_one");
        REQUIRE(run("sparse -c " + kConfigs + "three_targets.json -o " + s.string()) == 0);
        REQUIRE(run("montecarlo -c " + kConfigs + "three_targets.json -o " + m.string() + " --trials 1") == 0);
        const Table sparse = read_csv(s / "sparse_estimates.csv");
        const Table trials = read_csv(m / "montecarlo_trials.csv");
        REQUIRE(trials.rows.size() == 3);
        std::size_t matched = 0;
        for (std::size_t i = 0; i < sparse.rows.size(); ++i)
            if (sparse.number(i, "rank") == 0.0)
            {
                const auto target = static_cast<std::size_t>(sparse.number(i, "target"));
                CHECK(sparse.number(i, "est_theta_deg") == trials.number(target, "est_theta_deg"));
                ++matched;
            }
        CHECK(matched == 3);
    }

    TEST_CASE("Monte-Carlo summary is well formed")
    {
        const fs::path m = scratch("mc_summary");
        REQUIRE(run("montecarlo -c " + kConfigs + "three_targets.json -o " + m.string() +
                    " --trials 4 --sweep snr --values 10,inf") == 0);
        const Table t = read_csv(m / "montecarlo.csv");
        REQUIRE(t.rows.size() == 2);
        for (std::size_t i = 0; i < 2; ++i)
        {
            const double rate = t.number(i, "success_rate");
            CHECK(rate >= 0.0);
            CHECK(rate <= 1.0);
            CHECK(t.number(i, "successes") == rate * t.number(i, "trials"));
        }
        CHECK(t.number(1, "success_rate") == 1.0);
        CHECK(t.number(1, "median_abs_error_deg") <= 0.5);
        CHECK(read_csv(m / "montecarlo_trials.csv").rows.size() == 2 * 4 * 3);
    }

    TEST_CASE("exit codes")
    {
        const fs::path dir = scratch("codes");
        CHECK(run("validate -c " + (dir / "missing.json").string()) == 2);
        CHECK(run("frobnicate") == 2);
        CHECK(run("montecarlo -c " + kConfigs + "three_targets.json --sweep sideways") == 2);

        {
            std::ofstream bad(dir / "bad.json");
            bad << R"({ "targets": [ { "theta_deg": 40.0, "s1_m": 2.41 } ], "scene": { "radar": [1.0, 0.0] } })";
        }
        CHECK(run("validate -c " + (dir / "bad.json").string()) == 2);

        {
            std::ofstream tight(dir / "tight.json");
            tight << R"({ "targets": [ { "theta_deg": 40.0, "s1_m": 2.41 }, { "theta_deg": 140.0, "s1_m": 2.34 } ],
                          "estimation": { "angle_step_deg": 1.0, "brute_budget": 10 } })";
        }
        CHECK(run("brute -c " + (dir / "tight.json").string() + " -o " + (dir / "out").string()) == 3);
    }
}
