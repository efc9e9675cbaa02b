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

// Acceptance suite: one PASS/FAIL line per criterion.

#include "../support.hpp"

#include "metasense/config.hpp"
#include "metasense/errors.hpp"
#include "metasense/experiments.hpp"
#include "metasense/metasense.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace metasense;
namespace fs = std::filesystem;

namespace
{
    const std::string kConfigs = std::string(METASENSE_SOURCE_DIR) + "/configs/";

    int failures = 0;

    void report(int id, bool pass, const std::string &what, const std::string &measured)
    {
        std::printf("%s criterion %d: %s [%s]\n", pass ? "PASS" : "FAIL", id, what.c_str(), measured.c_str());
        std::fflush(stdout);
        if (!pass)
            ++failures;
    }

    void note(const std::string &text)
    {
        std::printf("    %s\n", text.c_str());
        std::fflush(stdout);
    }

    std::string format(const char *fmt, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        return buf;
    }

    double seconds(const std::function<void()> &body)
    {
        const auto start = std::chrono::steady_clock::now();
        body();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    void guarded(int id, const std::string &what, const std::function<void()> &body)
    {
        try
        {
            body();
        }
        catch (const std::exception &e)
        {
            report(id, false, what, std::string("exception: ") + e.what());
        }
    }

    void brute_force_rate()
    {
        const std::string what = "two-target brute force minimum within 1 deg in >= 90% of 50 trials, <= 60 s";
        guarded(1, what, [&] {
            ScenarioConfig c = load_config(kConfigs + "two_targets_brute.json");
            c.montecarlo.trials = 50;
            c.montecarlo.sweep = SweepKind::None;
            c.montecarlo.estimator = TrialEstimator::Brute;
            std::vector<SweepPoint> points;
            const double t = seconds([&] { points = monte_carlo(c); });
            const SweepPoint &p = points.at(0);
            report(1, p.success_rate >= 0.9 && t <= 60.0, what,
                   format("%d/%d trials, %.1f s", p.successes, p.trials, t));
        });
    }

    void sparse_rate()
    {
        const std::string what = "three-target LASSO within 0.5 deg in >= 90% of 50 trials, <= 30 s";
        guarded(2, what, [&] {
            ScenarioConfig c = load_config(kConfigs + "three_targets.json");
            c.montecarlo.trials = 50;
            c.montecarlo.sweep = SweepKind::None;
            c.montecarlo.estimator = TrialEstimator::Sparse;
            std::vector<SweepPoint> points;
            const double t = seconds([&] { points = monte_carlo(c); });
            const SweepPoint &p = points.at(0);
            report(2, p.success_rate >= 0.9 && t <= 30.0, what,
                   format("%d/%d trials, %.1f s", p.successes, p.trials, t));
        });
    }

    void squint()
    {
        const std::string what = "region coherence 60 GHz < 10 GHz and LASSO success strictly improves 10 -> 60 GHz";
        guarded(3, what, [&] {
            ScenarioConfig c = load_config(kConfigs + "three_targets.json");
            const ForwardModel model = make_model(c);
            const std::vector<Target> targets = make_targets(c, model.scene);
            const double p = exact_path_lengths(model.scene, targets.at(0).position).p;
            const AngleGrid grid = AngleGrid::uniform_degrees(c.estimation.angle_step_deg);
            const std::vector<SquintPoint> sweep = squint_sweep(model, grid, p, {10e9, 60e9}, 1,
                                                                c.coherence.db_down);
            const double mu10 = sweep[0].region.mu, mu60 = sweep[1].region.mu;

            c.montecarlo.trials = 50;
            c.montecarlo.sweep = SweepKind::Bandwidth;
            c.montecarlo.values = {10e9, 60e9};
            c.montecarlo.estimator = TrialEstimator::Sparse;
            const std::vector<SweepPoint> joint = monte_carlo(c);
            const bool pass = mu60 < mu10 && joint[1].success_rate > joint[0].success_rate;
            report(3, pass, what,
                   format("mu %.4f -> %.4f over %zu region columns; success %.2f -> %.2f", mu10, mu60,
                          sweep[0].region.angles.size(), joint[0].success_rate, joint[1].success_rate));

            c.estimation.pipeline = PipelineMode::Independent;
            const std::vector<SweepPoint> independent = monte_carlo(c);
            note(format("per-range independent solves: success %.2f -> %.2f", independent[0].success_rate,
                        independent[1].success_rate));
        });
    }

    void dechirp()
    {
        const std::string what = "dechirp residual < 1e-6 rad";
        guarded(4, what, [&] {
            double worst = 0.0;
            for (const double r : {0.5, 2.902, 4.0, 6.5, 12.0})
                worst = std::max(worst, dechirp_validate(WaveformSpec{}, r, 1.0));
            report(4, worst < 1e-6, what, format("max %.3g rad", worst));
        });
    }

    void oracle()
    {
        const std::string what = "two-path model vs per-element sum: < 1% amplitude, < 0.01 rad phase, 10-170 deg";
        guarded(5, what, [&] {
            const ForwardModel m = testing::scaled_model();
            double amp = 0.0, phase = 0.0;
            for (const double s : {20.0, 40.0, 80.0})
                for (int tenth = 100; tenth <= 1700; tenth += 5)
                {
                    const Target t = testing::polar_target(m.scene, tenth / 10.0, s);
                    const auto e = testing::compare_with_oracle(twopath_echo(m.grid, m.scene, m.surfaces, t),
                                                                testing::element_sum(m.grid, m.scene, m.surfaces, t));
                    amp = std::max(amp, e.amplitude);
                    phase = std::max(phase, e.phase);
                }
            report(5, amp < 0.01 && phase < 0.01, what, format("amplitude %.4f, phase %.4f rad", amp, phase));
        });
    }

    CMatrix random_unit_columns(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g(0.0, 1.0);
        CMatrix V(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
        {
            for (Eigen::Index i = 0; i < rows; ++i)
                V(i, j) = cdouble(g(rng), g(rng));
            V.col(j).normalize();
        }
        return V;
    }

    void solvers()
    {
        const std::string what = "LASSO KKT <= 1e-6 and orthonormal closed form to 1e-8; OMP 3-sparse recovery; "
                                 "lambda >= max correlation gives zero";
        guarded(6, what, [&] {
            std::mt19937_64 rng(2024);
            std::uniform_int_distribution<int> pick(0, 127);
            double kkt = 0.0, closed = 0.0;
            int omp_ok = 0, zero_ok = 0;
            const int trials = 50;
            for (int t = 0; t < trials; ++t)
            {
                const CMatrix V = random_unit_columns(48, 128, rng);
                CVector x0 = CVector::Zero(128);
                std::vector<std::size_t> support;
                while (support.size() < 3)
                {
                    const auto j = static_cast<std::size_t>(pick(rng));
                    if (std::find(support.begin(), support.end(), j) == support.end())
                        support.push_back(j);
                }
                for (std::size_t i = 0; i < 3; ++i)
                    x0[static_cast<Eigen::Index>(support[i])] = std::polar(1.0 - 0.2 * static_cast<double>(i), 1.0 + t);
                const CVector clean = V * x0;
                const CVector y = clean + 0.05 * random_unit_columns(48, 1, rng).col(0);

                const double bound = (V.adjoint() * y).cwiseAbs().maxCoeff();
                const double lambda = 0.1 * bound;
                kkt = std::max(kkt, lasso(V, y, {lambda}).kkt_violation);
                zero_ok += lasso(V, y, {bound}).coefficients.isZero(0.0) &&
                           lasso(V, y, {1.5 * bound}).coefficients.isZero(0.0);

                const Eigen::HouseholderQR<CMatrix> qr(V.leftCols(32));
                const CMatrix Q = qr.householderQ() * CMatrix::Identity(48, 32);
                const SparseResult r = lasso(Q, y, {lambda, 20000, 1e-14});
                const CVector z = Q.adjoint() * y;
                for (Eigen::Index j = 0; j < 32; ++j)
                    closed = std::max(closed, std::abs(r.coefficients[j] - soft_threshold(z[j], lambda)));

                const SparseResult o = omp(V, clean, {3});
                std::vector<std::size_t> found = o.support, expected = support;
                std::sort(found.begin(), found.end());
                std::sort(expected.begin(), expected.end());
                omp_ok += found == expected && (o.coefficients - x0).norm() < 1e-10;
            }
            const bool pass = kkt <= 1e-6 && closed <= 1e-8 && omp_ok == trials && zero_ok == trials;
            report(6, pass, what,
                   format("KKT %.2g, closed form %.2g, OMP %d/%d, zero %d/%d", kkt, closed, omp_ok, trials, zero_ok,
                          trials));
        });
    }

    std::string slurp(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    // Runs a command through the C API; returns the written files' contents keyed by file name.
    std::vector<std::pair<std::string, std::string>> run_command(const std::string &config, ms_command command,
                                                                 const fs::path &dir, int threads)
    {
        ms_scenario *s = nullptr;
        if (ms_scenario_load(config.c_str(), &s) != MS_OK)
            throw std::runtime_error(ms_last_error());
        ms_scenario_set_threads(s, threads);
        ms_scenario_set_trials(s, 3);
        const double bandwidths[] = {10e9, 60e9};
        ms_scenario_set_bandwidths(s, bandwidths, 2);
        ms_scenario_set_output_dir(s, dir.c_str());
        ms_report *r = nullptr;
        const ms_status status = ms_run(s, command, &r);
        ms_scenario_free(s);
        if (status != MS_OK)
        {
            ms_report_free(r);
            throw std::runtime_error(ms_last_error());
        }
        std::vector<std::pair<std::string, std::string>> out;
        for (std::size_t i = 0; i < ms_report_file_count(r); ++i)
        {
            const std::string path = ms_report_file(r, i);
            out.emplace_back(fs::path(path).filename().string(), slurp(path));
        }
        ms_report_free(r);
        return out;
    }

    void determinism()
    {
        const std::string what = "re-runs with the same config and seed give byte-identical CSVs (threads 1 and 4)";
        guarded(7, what, [&] {
            const fs::path root = fs::path(METASENSE_TEST_TMP) / "acceptance";
            fs::remove_all(root);
            struct Case
            {
                const char *config;
                ms_command command;
                const char *name;
            };
            const Case cases[] = {{"three_targets.json", MS_CMD_SIMULATE, "simulate"},
                                  {"two_targets_brute.json", MS_CMD_BRUTE, "brute"},
                                  {"three_targets.json", MS_CMD_SPARSE, "sparse"},
                                  {"coherence_4el_10ghz.json", MS_CMD_COHERENCE, "coherence"},
                                  {"three_targets.json", MS_CMD_MONTECARLO, "montecarlo"},
                                  {"two_targets_brute.json", MS_CMD_MONTECARLO, "montecarlo-brute"}};
            int files = 0, mismatches = 0;
            std::string bad;
            for (const Case &c : cases)
            {
                const auto a = run_command(kConfigs + c.config, c.command, root / c.name / "a", 1);
                const auto b = run_command(kConfigs + c.config, c.command, root / c.name / "b", 1);
                const auto t = run_command(kConfigs + c.config, c.command, root / c.name / "t", 4);
                if (a.empty() || a.size() != b.size() || a.size() != t.size())
                {
                    ++mismatches;
                    bad += std::string(" ") + c.name;
                    continue;
                }
                for (std::size_t i = 0; i < a.size(); ++i)
                {
                    ++files;
                    if (a[i] != b[i] || a[i] != t[i])
                    {
                        ++mismatches;
                        bad += " " + a[i].first;
                    }
                }
            }
            report(7, mismatches == 0, what,
                   format("%d files over %zu commands, %d mismatched%s", files, std::size(cases), mismatches,
                          bad.c_str()));
        });
    }
}

int main()
{
    brute_force_rate();
    sparse_rate();
    squint();
    dechirp();
    oracle();
    solvers();
    determinism();
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
