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

#include "metasense/experiments.hpp"
#include "metasense/errors.hpp"
#include "metasense/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace metasense
{
    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        std::string fmt(double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        template <std::integral T>
        std::string fmt(T v)
        {
            return std::to_string(v);
        }

        // Short, stable label for file names: 10e9 -> "10GHz", 12.5e9 -> "12.5GHz".
        std::string ghz_label(double hz)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%gGHz", hz / 1e9);
            return buf;
        }

        class Csv
        {
        public:
            Csv(const ScenarioConfig &config, const std::string &name, const std::string &command,
                std::vector<std::pair<std::string, std::string>> extra = {})
                : path_((std::filesystem::path(config.output_dir) / name).string())
            {
                std::error_code ec;
                std::filesystem::create_directories(config.output_dir, ec);
                if (ec)
                    throw IoError("cannot create output directory '" + config.output_dir + "': " + ec.message());
                out_.open(path_, std::ios::binary | std::ios::trunc);
                if (!out_)
                    throw IoError("cannot write '" + path_ + "'");
                out_ << "# metasense " << command << "\n";
                out_ << "# config_hash=" << config_hash(config) << "\n";
                out_ << "# seed=" << config.noise.seed << "\n";
                for (const auto &[k, v] : extra)
                    out_ << "# " << k << "=" << v << "\n";
            }

            void row(const std::vector<std::string> &cells)
            {
                for (std::size_t i = 0; i < cells.size(); ++i)
                    out_ << (i ? "," : "") << cells[i];
                out_ << "\n";
            }

            const std::string &close()
            {
                out_.close();
                if (!out_)
                    throw IoError("failed writing '" + path_ + "'");
                return path_;
            }

        private:
            std::string path_;
            std::ofstream out_;
        };

        // True target parameters as the estimators see them.
        struct Truth
        {
            std::vector<Target> targets;
            std::vector<double> theta;  // [rad]
            std::vector<double> ranges; // p [m]
        };

        Truth make_truth(const ScenarioConfig &config, const SceneGeometry &scene)
        {
            Truth t;
            t.targets = make_targets(config, scene);
            for (const Target &target : t.targets)
            {
                t.theta.push_back(point_to_polar(scene, target.position).theta);
                t.ranges.push_back(exact_path_lengths(scene, target.position).p);
            }
            return t;
        }

        std::vector<RangePrior> priors_of(const Truth &truth)
        {
            std::vector<RangePrior> priors;
            for (std::size_t i = 0; i < truth.targets.size(); ++i)
                priors.push_back({truth.ranges[i], truth.targets[i].rcs});
            return priors;
        }

        double seconds_since(std::chrono::steady_clock::time_point start)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }

        std::string deg(double rad)
        {
            std::ostringstream s;
            s << std::fixed << std::setprecision(3) << rad2deg(rad);
            return s.str();
        }

        bool within_step(double est_deg, double true_deg, double step_deg)
        {
            return std::abs(est_deg - true_deg) <= step_deg * (1.0 + 1e-9);
        }

        // Estimated angle per target [deg], NaN where nothing was returned.
        std::vector<double> estimate_angles(const ScenarioConfig &config, const ForwardModel &model,
                                            const AngleGrid &grid, SensingMatrixCache *cache, const CVector &y,
                                            const std::vector<RangePrior> &priors)
        {
            std::vector<double> out(priors.size(), kNaN);
            if (config.montecarlo.estimator == TrialEstimator::Brute)
            {
                BruteForceOptions options = make_brute_options(config);
                options.threads = 1;
                try
                {
                    const BruteForceResult r = priors.size() == 1
                                                   ? brute_force_single(y, model, priors[0], grid, options)
                                                   : brute_force_multi(y, model, priors, grid, options);
                    for (std::size_t i = 0; i < out.size(); ++i)
                        out[i] = rad2deg(r.best_angles[i]);
                }
                catch (const EstimationError &)
                {
                }
                return out;
            }
            PipelineConfig pipeline = make_pipeline_config(config);
            pipeline.threads = 1;
            std::vector<double> ranges;
            for (const RangePrior &p : priors)
                ranges.push_back(p.range);
            const std::vector<RangeEstimate> est = per_range_pipeline(y, ranges, *cache, pipeline);
            for (std::size_t i = 0; i < out.size(); ++i)
                if (est[i].ok && !est[i].angles.empty())
                    out[i] = rad2deg(est[i].angles.front());
            return out;
        }
    }

    std::vector<SweepPoint> monte_carlo(const ScenarioConfig &config)
    {
        const MonteCarloConfig &mc = config.montecarlo;
        std::vector<double> values = mc.values;
        if (mc.sweep == SweepKind::None)
            values = {config.noise.snr_db};

        std::vector<SweepPoint> points;
        for (const double value : values)
        {
            ScenarioConfig c = config;
            if (mc.sweep == SweepKind::Snr)
                c.noise.snr_db = value;
            else if (mc.sweep == SweepKind::Bandwidth)
                c.waveform.bandwidth_hz = value;

            const ForwardModel model = make_model(c);
            const Truth truth = make_truth(c, model.scene);
            const AngleGrid grid = AngleGrid::uniform_degrees(c.estimation.angle_step_deg);
            SensingMatrixCache cache(model, grid, c.threads);
            if (mc.estimator == TrialEstimator::Sparse)
                for (const double p : truth.ranges)
                {
                    try
                    {
                        (void)cache.get(p);
                    }
                    catch (const Error &)
                    {
                        // reported per range by the pipeline
                    }
                }
            const Measurement clean = multi_target_echo(model.grid, model.scene, model.surfaces, truth.targets,
                                                       NoiseSpec{std::numeric_limits<double>::infinity(), 0});

            SweepPoint point;
            point.value = value;
            point.trials = mc.trials;
            point.outcomes.resize(static_cast<std::size_t>(mc.trials));
            parallel_for(point.outcomes.size(), c.threads, [&](std::size_t t) {
                TrialOutcome &o = point.outcomes[t];
                o.seed = c.noise.seed + t;
                std::vector<Target> targets = truth.targets;
                if (mc.random_rcs)
                {
                    std::mt19937_64 rng(o.seed ^ 0x9e3779b97f4a7c15ull);
                    std::uniform_real_distribution<double> u(0.0, 1.0);
                    for (Target &target : targets)
                        target.rcs = 1.0 - u(rng);
                }
                const Measurement m =
                    mc.random_rcs
                        ? multi_target_echo(model.grid, model.scene, model.surfaces, targets, {c.noise.snr_db, o.seed})
                        : add_noise(model.grid, clean.noise_free, {c.noise.snr_db, o.seed});
                std::vector<RangePrior> priors;
                for (std::size_t i = 0; i < targets.size(); ++i)
                    priors.push_back({truth.ranges[i], targets[i].rcs});
                o.estimated_deg = estimate_angles(c, model, grid, &cache, m.samples, priors);
                o.success = true;
                for (std::size_t i = 0; i < targets.size(); ++i)
                {
                    o.true_deg.push_back(rad2deg(truth.theta[i]));
                    o.rcs.push_back(targets[i].rcs);
                    if (std::isnan(o.estimated_deg[i]) ||
                        !within_step(o.estimated_deg[i], o.true_deg[i], c.estimation.angle_step_deg))
                        o.success = false;
                }
            });

            std::vector<double> errors;
            for (const TrialOutcome &o : point.outcomes)
            {
                point.successes += o.success ? 1 : 0;
                for (std::size_t i = 0; i < o.true_deg.size(); ++i)
                    if (!std::isnan(o.estimated_deg[i]))
                        errors.push_back(std::abs(o.estimated_deg[i] - o.true_deg[i]));
            }
            point.success_rate = static_cast<double>(point.successes) / static_cast<double>(point.trials);
            if (errors.empty())
            {
                point.rmse_deg = point.median_abs_error_deg = kNaN;
            }
            else
            {
                double sq = 0.0;
                for (const double e : errors)
                    sq += e * e;
                point.rmse_deg = std::sqrt(sq / static_cast<double>(errors.size()));
                std::sort(errors.begin(), errors.end());
                const std::size_t n = errors.size();
                point.median_abs_error_deg = n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
            }
            points.push_back(std::move(point));
        }
        return points;
    }

    CommandResult cmd_validate(const ScenarioConfig &config)
    {
        CommandResult result;
        std::ostringstream r;
        const SceneGeometry scene = make_scene(config);
        const SurfacePair pair = make_surfaces(config);
        const FrequencyGrid grid(config.waveform);
        r << std::setprecision(6);
        r << "config_hash      " << config_hash(config) << "\n";
        r << "seed             " << config.noise.seed << "\n";
        r << "separation d     " << scene.separation() << " m\n";
        r << "t1, t2           " << scene.radar_to_surface1() << ", " << scene.radar_to_surface2() << " m\n";
        r << "t (midpoint)     " << scene.radar_to_midpoint() << " m\n";
        r << "theta_in         " << deg(scene.incidence_angle()) << " deg\n";
        r << "radar direction  " << deg(scene.radar_direction()) << " deg\n";
        r << "wavenumbers      " << grid.wavenumbers().front() << " .. " << grid.wavenumbers().back() << " rad/m ("
          << grid.size() << " samples)\n";
        r << "elements         " << pair.first.ula.elements << " x 2, spacing " << pair.first.ula.spacing << " m\n";
        r << "snr              " << config.noise.snr_db << " dB\n";
        const Truth truth = make_truth(config, scene);
        for (std::size_t i = 0; i < truth.targets.size(); ++i)
        {
            const Point2 pos = truth.targets[i].position;
            const PathLengths paths = exact_path_lengths(scene, pos);
            const FarFieldAngles ff = far_field_angles(scene, pos);
            const bool feasible = range_is_feasible(scene, paths.p, truth.theta[i]);
            r << "target " << i << "         theta " << deg(truth.theta[i]) << " deg, p " << paths.p << " m, s1 "
              << paths.s1 << " m, s2 " << paths.s2 << " m, rcs " << truth.targets[i].rcs
              << (feasible ? ", feasible" : ", infeasible") << (ff.near_field ? ", near field" : "") << "\n";
        }
        for (const std::string &w : config.warnings)
            r << "warning: " << w << "\n";
        r << "valid\n";
        result.report = r.str();
        return result;
    }

    CommandResult cmd_simulate(const ScenarioConfig &config)
    {
        CommandResult result;
        const ForwardModel model = make_model(config);
        const Truth truth = make_truth(config, model.scene);
        const Measurement m = multi_target_echo(model.grid, model.scene, model.surfaces, truth.targets, config.noise);

        Csv csv(config, "measurement.csv", "simulate",
                {{"snr_db", fmt(m.snr_db)}, {"noise_variance", fmt(m.noise_variance)}});
        csv.row({"k_radpm", "re_y", "im_y", "re_noise_free", "im_noise_free"});
        for (std::size_t i = 0; i < model.grid.size(); ++i)
        {
            const auto k = static_cast<Eigen::Index>(i);
            csv.row({fmt(model.grid[i]), fmt(m.samples[k].real()), fmt(m.samples[k].imag()),
                     fmt(m.noise_free[k].real()), fmt(m.noise_free[k].imag())});
        }
        result.files.push_back(csv.close());
        std::ostringstream r;
        r << "simulated " << model.grid.size() << " samples, " << truth.targets.size() << " target(s), snr "
          << m.snr_db << " dB, seed " << m.seed << "\n";
        result.report = r.str();
        return result;
    }

    CommandResult cmd_brute(const ScenarioConfig &config)
    {
        CommandResult result;
        const ForwardModel model = make_model(config);
        const Truth truth = make_truth(config, model.scene);
        const Measurement m = multi_target_echo(model.grid, model.scene, model.surfaces, truth.targets, config.noise);
        const AngleGrid grid = AngleGrid::uniform_degrees(config.estimation.angle_step_deg);
        const std::vector<RangePrior> priors = priors_of(truth);

        BruteForceResult r;
        try
        {
            r = priors.size() == 1 ? brute_force_single(m.samples, model, priors[0], grid, make_brute_options(config))
                                   : brute_force_multi(m.samples, model, priors, grid, make_brute_options(config));
        }
        catch (const EstimationError &e)
        {
            result.status = 3;
            result.report = std::string("estimation failed: ") + e.what() + "\n";
            return result;
        }

        if (priors.size() <= 2)
        {
            Csv csv(config, "brute_loss.csv", "brute", {{"angle_step_deg", fmt(config.estimation.angle_step_deg)}});
            if (priors.size() == 1)
            {
                csv.row({"theta_deg", "loss"});
                for (std::size_t i = 0; i < grid.size(); ++i)
                    csv.row({fmt(rad2deg(grid[i])), fmt(r.loss_surface[i])});
            }
            else
            {
                // Rows: target 1 angle; columns: target 2 angle.
                std::vector<std::string> header{"theta1_deg\\theta2_deg"};
                for (std::size_t j = 0; j < grid.size(); ++j)
                    header.push_back(fmt(rad2deg(grid[j])));
                csv.row(header);
                for (std::size_t i = 0; i < grid.size(); ++i)
                {
                    std::vector<std::string> row{fmt(rad2deg(grid[i]))};
                    for (std::size_t j = 0; j < grid.size(); ++j)
                        row.push_back(fmt(r.loss_surface[i * grid.size() + j]));
                    csv.row(row);
                }
            }
            result.files.push_back(csv.close());
        }

        Csv csv(config, "brute_result.csv", "brute",
                {{"best_loss", fmt(r.best_loss)}, {"evaluated", fmt(r.evaluated)}});
        csv.row({"target", "range_m", "rcs_prior", "true_theta_deg", "est_theta_deg", "abs_error_deg"});
        std::ostringstream rep;
        rep << "brute force over " << r.evaluated << " candidates in " << std::setprecision(3) << r.seconds
            << " s, best loss " << std::setprecision(6) << r.best_loss << "\n";
        for (std::size_t i = 0; i < priors.size(); ++i)
        {
            const double t = rad2deg(truth.theta[i]), e = rad2deg(r.best_angles[i]);
            csv.row({fmt(i), fmt(priors[i].range), fmt(priors[i].rcs), fmt(t), fmt(e), fmt(std::abs(e - t))});
            rep << "target " << i << ": true " << deg(truth.theta[i]) << " deg, estimate " << deg(r.best_angles[i])
                << " deg\n";
        }
        result.files.push_back(csv.close());
        result.report = rep.str();
        return result;
    }

    CommandResult cmd_sparse(const ScenarioConfig &config)
    {
        CommandResult result;
        const ForwardModel model = make_model(config);
        const Truth truth = make_truth(config, model.scene);
        const Measurement m = multi_target_echo(model.grid, model.scene, model.surfaces, truth.targets, config.noise);
        const AngleGrid grid = AngleGrid::uniform_degrees(config.estimation.angle_step_deg);
        SensingMatrixCache cache(model, grid, config.threads);
        const PipelineConfig pipeline = make_pipeline_config(config);
        const auto start = std::chrono::steady_clock::now();
        const std::vector<RangeEstimate> est = per_range_pipeline(m.samples, truth.ranges, cache, pipeline);
        const double seconds = seconds_since(start);

        std::ostringstream rep;
        rep << (config.estimation.solver == Solver::Lasso ? "lasso" : "omp") << ", "
            << (config.estimation.pipeline == PipelineMode::Joint ? "joint" : "independent") << " pipeline over "
            << est.size() << " range(s) in " << std::setprecision(3) << seconds << " s\n";

        Csv estimates(config, "sparse_estimates.csv", "sparse");
        estimates.row({"target", "range_m", "rank", "true_theta_deg", "est_theta_deg", "abs_error_deg", "re_rcs",
                       "im_rcs", "status"});
        for (std::size_t i = 0; i < est.size(); ++i)
        {
            const double t = rad2deg(truth.theta[i]);
            if (!est[i].ok)
            {
                result.status = 3;
                estimates.row({fmt(i), fmt(est[i].range), "0", fmt(t), "nan", "nan", "nan", "nan", "failed"});
                rep << "target " << i << ": failed: " << est[i].error << "\n";
                continue;
            }
            for (std::size_t s = 0; s < est[i].angles.size(); ++s)
            {
                const double e = rad2deg(est[i].angles[s]);
                estimates.row({fmt(i), fmt(est[i].range), fmt(s), fmt(t), fmt(e), fmt(std::abs(e - t)),
                               fmt(est[i].rcs_estimates[s].real()), fmt(est[i].rcs_estimates[s].imag()), "ok"});
            }
            rep << "target " << i << ": true " << deg(truth.theta[i]) << " deg, estimate "
                << deg(est[i].angles.front()) << " deg" << (est[i].solver.warning ? " (solver warning)" : "") << "\n";
        }
        result.files.push_back(estimates.close());

        Csv spectrum(config, "sparse_spectrum.csv", "sparse");
        std::vector<std::string> header{"theta_deg"};
        for (std::size_t i = 0; i < est.size(); ++i)
            header.push_back("abs_x_range" + std::to_string(i));
        spectrum.row(header);
        for (std::size_t g = 0; g < grid.size(); ++g)
        {
            std::vector<std::string> row{fmt(rad2deg(grid[g]))};
            for (const RangeEstimate &e : est)
                row.push_back(e.spectrum.size() ? fmt(e.spectrum[static_cast<Eigen::Index>(g)].real()) : "nan");
            spectrum.row(row);
        }
        result.files.push_back(spectrum.close());

        // Joint mode shares one solve; its trace is written once as solve 0.
        Csv trace(config, "sparse_trace.csv", "sparse");
        trace.row({"solve", "iteration", "objective", "residual"});
        const std::size_t solves = config.estimation.pipeline == PipelineMode::Joint ? std::min<std::size_t>(1, est.size())
                                                                                      : est.size();
        for (std::size_t s = 0; s < solves; ++s)
        {
            const RangeEstimate *src = &est[s];
            if (config.estimation.pipeline == PipelineMode::Joint)
                for (const RangeEstimate &e : est)
                    if (!e.solver.trace.empty())
                    {
                        src = &e;
                        break;
                    }
            for (const TraceEntry &t : src->solver.trace)
                trace.row({fmt(s), fmt(t.iteration), fmt(t.objective), fmt(t.residual)});
        }
        result.files.push_back(trace.close());
        result.report = rep.str();
        return result;
    }

    CommandResult cmd_coherence(const ScenarioConfig &config)
    {
        CommandResult result;
        const ForwardModel model = make_model(config);
        const Truth truth = make_truth(config, model.scene);
        const double p = config.coherence.range_m.value_or(truth.ranges.front());
        const AngleGrid grid = AngleGrid::uniform_degrees(config.estimation.angle_step_deg);
        std::vector<SquintPoint> sweep;
        try
        {
            sweep = squint_sweep(model, grid, p, config.coherence.bandwidths_hz, config.threads, config.coherence.db_down);
        }
        catch (const EstimationError &e)
        {
            result.status = 3;
            result.report = std::string("estimation failed: ") + e.what() + "\n";
            return result;
        }

        std::ostringstream rep;
        rep << "coherence at p = " << std::setprecision(6) << p << " m over " << grid.size() << " angles\n";
        Csv summary(config, "coherence_summary.csv", "coherence",
                    {{"range_m", fmt(p)}, {"db_down", fmt(config.coherence.db_down)}});
        summary.row({"bandwidth_hz", "columns", "mu_full", "full_pair_deg_1", "full_pair_deg_2", "region_columns",
                     "mu_region", "region_pair_deg_1", "region_pair_deg_2"});
        for (const SquintPoint &s : sweep)
        {
            const bool has_region = s.region.angles.size() >= 2;
            summary.row({fmt(s.bandwidth_hz), fmt(s.matrix.cols()), fmt(s.full.mu), fmt(rad2deg(s.full.argmax_pair.first)),
                         fmt(rad2deg(s.full.argmax_pair.second)), fmt(s.region.angles.size()), fmt(s.region.mu),
                         has_region ? fmt(rad2deg(s.region.argmax_pair.first)) : "nan",
                         has_region ? fmt(rad2deg(s.region.argmax_pair.second)) : "nan"});
            rep << ghz_label(s.bandwidth_hz) << ": mu " << s.full.mu << " (all " << s.matrix.cols() << " columns), "
                << s.region.mu << " (" << s.region.angles.size() << " high-gain columns)\n";
        }
        result.files.push_back(summary.close());

        for (const SquintPoint &s : sweep)
        {
            const std::string label = ghz_label(s.bandwidth_hz);
            const std::vector<std::pair<std::string, std::string>> extra{{"bandwidth_hz", fmt(s.bandwidth_hz)},
                                                                         {"range_m", fmt(p)}};
            // Rows: wavenumber samples; columns: feasible angles.
            for (const bool phase : {false, true})
            {
                Csv map(config, "coherence_matrix_" + label + (phase ? "_phase.csv" : "_mag.csv"), "coherence", extra);
                std::vector<std::string> header{"k_radpm\\theta_deg"};
                for (std::size_t j = 0; j < s.matrix.cols(); ++j)
                    header.push_back(fmt(rad2deg(s.matrix.column_angle(j))));
                map.row(header);
                for (Eigen::Index i = 0; i < s.matrix.columns.rows(); ++i)
                {
                    std::vector<std::string> row{fmt(s.matrix.grid[static_cast<std::size_t>(i)])};
                    for (Eigen::Index j = 0; j < s.matrix.columns.cols(); ++j)
                        row.push_back(fmt(phase ? std::arg(s.matrix.columns(i, j)) : std::abs(s.matrix.columns(i, j))));
                    map.row(row);
                }
                result.files.push_back(map.close());
            }

            Csv gram(config, "coherence_gram_" + label + ".csv", "coherence", extra);
            std::vector<std::string> header{"theta_deg\\theta_deg"};
            for (const double a : s.full.angles)
                header.push_back(fmt(rad2deg(a)));
            gram.row(header);
            for (Eigen::Index i = 0; i < s.full.gram.rows(); ++i)
            {
                std::vector<std::string> row{fmt(rad2deg(s.full.angles[static_cast<std::size_t>(i)]))};
                for (Eigen::Index j = 0; j < s.full.gram.cols(); ++j)
                    row.push_back(fmt(s.full.gram(i, j)));
                gram.row(row);
            }
            result.files.push_back(gram.close());
        }
        result.report = rep.str();
        return result;
    }

    CommandResult cmd_montecarlo(const ScenarioConfig &config)
    {
        CommandResult result;
        const auto start = std::chrono::steady_clock::now();
        const std::vector<SweepPoint> points = monte_carlo(config);
        const double seconds = seconds_since(start);
        const char *sweep = config.montecarlo.sweep == SweepKind::Snr         ? "snr_db"
                            : config.montecarlo.sweep == SweepKind::Bandwidth ? "bandwidth_hz"
                                                                              : "snr_db";

        Csv summary(config, "montecarlo.csv", "montecarlo",
                    {{"trials", fmt(config.montecarlo.trials)},
                     {"estimator", config.montecarlo.estimator == TrialEstimator::Brute ? "brute" : "sparse"},
                     {"angle_step_deg", fmt(config.estimation.angle_step_deg)}});
        summary.row({sweep, "trials", "successes", "success_rate", "rmse_deg", "median_abs_error_deg"});
        Csv trials(config, "montecarlo_trials.csv", "montecarlo");
        trials.row({sweep, "trial", "seed", "target", "rcs", "true_theta_deg", "est_theta_deg", "success"});

        std::ostringstream rep;
        rep << "monte carlo: " << config.montecarlo.trials << " trial(s) per point, " << std::setprecision(3) << seconds
            << " s\n"
            << std::setprecision(6);
        for (const SweepPoint &p : points)
        {
            summary.row({fmt(p.value), fmt(p.trials), fmt(p.successes), fmt(p.success_rate), fmt(p.rmse_deg),
                         fmt(p.median_abs_error_deg)});
            for (std::size_t t = 0; t < p.outcomes.size(); ++t)
            {
                const TrialOutcome &o = p.outcomes[t];
                for (std::size_t i = 0; i < o.true_deg.size(); ++i)
                    trials.row({fmt(p.value), fmt(t), fmt(o.seed), fmt(i), fmt(o.rcs[i]), fmt(o.true_deg[i]),
                                fmt(o.estimated_deg[i]), o.success ? "1" : "0"});
            }
            rep << sweep << " " << p.value << ": success " << p.successes << "/" << p.trials << ", rmse " << p.rmse_deg
                << " deg, median |error| " << p.median_abs_error_deg << " deg\n";
        }
        result.files.push_back(summary.close());
        result.files.push_back(trials.close());
        result.report = rep.str();
        return result;
    }
}
