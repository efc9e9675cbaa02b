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

#include "metasense/estimate.hpp"
#include "metasense/errors.hpp"
#include "metasense/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace metasense
{
    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        struct CandidateSet
        {
            std::vector<CVector> vectors; // empty vector where infeasible
            std::vector<bool> feasible;
        };

        CandidateSet candidates_for(const ForwardModel &model, const RangePrior &prior, const AngleGrid &grid,
                                    int threads)
        {
            CandidateSet set;
            set.vectors.resize(grid.size());
            set.feasible.assign(grid.size(), false);
            for (std::size_t i = 0; i < grid.size(); ++i)
                set.feasible[i] = range_is_feasible(model.scene, prior.range, grid[i]);
            parallel_for(grid.size(), threads, [&](std::size_t i) {
                if (set.feasible[i])
                    set.vectors[i] = model_vector(model, grid[i], prior.range, prior.rcs);
            });
            return set;
        }

        // ||y - sum||, or ||y - A a*|| with the least-squares amplitudes when refitting.
        double tuple_loss(const CVector &y, const std::vector<const CVector *> &parts, bool refit)
        {
            if (!refit)
            {
                CVector r = y;
                for (const CVector *v : parts)
                    r -= *v;
                return r.norm();
            }
            CMatrix A(y.size(), static_cast<Eigen::Index>(parts.size()));
            for (std::size_t m = 0; m < parts.size(); ++m)
                A.col(static_cast<Eigen::Index>(m)) = *parts[m];
            const CVector amp = A.colPivHouseholderQr().solve(y);
            return (y - A * amp).norm();
        }

        double seconds_since(std::chrono::steady_clock::time_point start)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }

        void pick_minimum(BruteForceResult &result, std::size_t dims)
        {
            result.best_loss = std::numeric_limits<double>::infinity();
            std::size_t best = result.loss_surface.size();
            for (std::size_t flat = 0; flat < result.loss_surface.size(); ++flat)
            {
                const double l = result.loss_surface[flat];
                if (!std::isnan(l) && l < result.best_loss) // strict: lowest flat index wins ties
                {
                    result.best_loss = l;
                    best = flat;
                }
            }
            if (best == result.loss_surface.size())
                throw EstimationError("no feasible angle candidate for the given range priors");

            const std::size_t n = result.angle_grid.size();
            result.best_indices.assign(dims, 0);
            for (std::size_t m = dims; m-- > 0;)
            {
                result.best_indices[m] = best % n;
                best /= n;
            }
            for (const std::size_t idx : result.best_indices)
                result.best_angles.push_back(result.angle_grid[idx]);
        }
    }

    BruteForceResult brute_force_single(const CVector &y, const ForwardModel &model, const RangePrior &prior,
                                        const AngleGrid &angle_grid, const BruteForceOptions &options)
    {
        const auto start = std::chrono::steady_clock::now();
        const CandidateSet set = candidates_for(model, prior, angle_grid, options.threads);

        BruteForceResult result;
        result.angle_grid = angle_grid;
        result.shape = {angle_grid.size()};
        result.loss_surface.assign(angle_grid.size(), kNaN);
        for (std::size_t i = 0; i < angle_grid.size(); ++i)
        {
            if (!set.feasible[i])
                continue;
            result.loss_surface[i] = tuple_loss(y, {&set.vectors[i]}, options.amplitude_refit);
            ++result.evaluated;
        }
        pick_minimum(result, 1);
        result.seconds = seconds_since(start);
        return result;
    }

    BruteForceResult brute_force_multi(const CVector &y, const ForwardModel &model,
                                       const std::vector<RangePrior> &priors, const AngleGrid &angle_grid,
                                       const BruteForceOptions &options)
    {
        if (priors.empty())
            throw EstimationError("brute-force search needs at least one target prior");
        if (priors.size() == 1)
            return brute_force_single(y, model, priors.front(), angle_grid, options);

        const std::size_t n = angle_grid.size();
        const std::size_t dims = priors.size();
        double required = 1.0;
        for (std::size_t m = 0; m < dims; ++m)
            required *= static_cast<double>(n);
        if (required > static_cast<double>(options.budget))
            throw EstimationError("brute-force search over " + std::to_string(dims) + " targets needs " +
                                  std::to_string(static_cast<unsigned long long>(required)) +
                                  " evaluations, budget is " + std::to_string(options.budget));

        const auto start = std::chrono::steady_clock::now();
        std::vector<CandidateSet> sets;
        sets.reserve(dims);
        for (const RangePrior &prior : priors)
            sets.push_back(candidates_for(model, prior, angle_grid, options.threads));

        BruteForceResult result;
        result.angle_grid = angle_grid;
        result.shape.assign(dims, n);
        const auto total = static_cast<std::size_t>(required);
        result.loss_surface.assign(total, kNaN);

        // One work item per leading index; each writes a disjoint slab of the surface.
        const std::size_t slab = total / n;
        std::vector<std::uint64_t> counts(n, 0);
        parallel_for(n, options.threads, [&](std::size_t lead) {
            if (!sets[0].feasible[lead])
                return;
            std::vector<std::size_t> digits(dims, 0);
            std::vector<const CVector *> parts(dims, nullptr);
            for (std::size_t rest = 0; rest < slab; ++rest)
            {
                std::size_t code = rest;
                bool feasible = true;
                digits[0] = lead;
                for (std::size_t m = dims; m-- > 1;)
                {
                    digits[m] = code % n;
                    code /= n;
                }
                for (std::size_t m = 0; m < dims && feasible; ++m)
                {
                    feasible = sets[m].feasible[digits[m]];
                    parts[m] = &sets[m].vectors[digits[m]];
                }
                if (!feasible)
                    continue;
                result.loss_surface[lead * slab + rest] = tuple_loss(y, parts, options.amplitude_refit);
                ++counts[lead];
            }
        });
        result.evaluated = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
        pick_minimum(result, dims);
        result.seconds = seconds_since(start);
        return result;
    }

    cdouble soft_threshold(cdouble z, double t)
    {
        const double mag = std::abs(z);
        if (mag <= t)
            return 0.0;
        return z * (1.0 - t / mag);
    }

    double spectral_norm_squared(const CMatrix &V, int iterations, double tol)
    {
        if (V.cols() == 0)
            return 0.0;
        // Deterministic start: all ones.
        CVector x = CVector::Ones(V.cols()) / std::sqrt(static_cast<double>(V.cols()));
        double estimate = 0.0;
        for (int it = 0; it < iterations; ++it)
        {
            CVector z = V.adjoint() * (V * x);
            const double next = z.norm();
            if (next == 0.0)
                return 0.0;
            x = z / next;
            const bool done = std::abs(next - estimate) <= tol * next;
            estimate = next;
            if (done)
                break;
        }
        return estimate;
    }

    double lasso_kkt_violation(const CMatrix &V, const CVector &y, const CVector &x, double lambda)
    {
        const CVector g = V.adjoint() * (V * x - y);
        double worst = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j)
        {
            const double mag = std::abs(x[j]);
            const double v = mag > 0.0 ? std::abs(g[j] + lambda * x[j] / mag) : std::max(std::abs(g[j]) - lambda, 0.0);
            worst = std::max(worst, v);
        }
        return lambda > 0.0 ? worst / lambda : worst;
    }

    namespace
    {
        CVector prox_l1(const CVector &z, double t)
        {
            CVector out(z.size());
            for (Eigen::Index j = 0; j < z.size(); ++j)
                out[j] = soft_threshold(z[j], t);
            return out;
        }
    }

    SparseResult lasso(const CMatrix &V, const CVector &y, const LassoOptions &options)
    {
        if (!(options.lambda > 0.0))
            throw EstimationError("LASSO needs lambda > 0");
        if (V.rows() != y.size())
            throw EstimationError("measurement length does not match the sensing matrix");

        SparseResult result;
        result.lambda = options.lambda;
        result.coefficients = CVector::Zero(V.cols());

        // Work on y / scale so objective values stay O(1) whatever the absolute signal level.
        const double scale = y.cwiseAbs().maxCoeff();
        if (!(scale > 0.0))
        {
            result.converged = true;
            result.trace.push_back({0, 0.0, 0.0});
            return result;
        }
        const CVector b = y / scale;
        const double lam = options.lambda / scale;

        // x = 0 is optimal exactly when no correlation exceeds lambda.
        if ((V.adjoint() * y).cwiseAbs().maxCoeff() <= options.lambda)
        {
            result.converged = true;
            result.residual_norm = y.norm();
            result.trace.push_back({0, 0.5 * y.squaredNorm(), result.residual_norm});
            return result;
        }

        const auto smooth = [&](const CVector &x) { return 0.5 * (b - V * x).squaredNorm(); };
        const auto objective = [&](const CVector &x, double f) { return f + lam * x.cwiseAbs().sum(); };

        double L = spectral_norm_squared(V, options.power_iterations, options.power_tol);
        if (!(L > 0.0))
            L = 1.0;

        CVector x = CVector::Zero(V.cols());
        CVector x_prev = x;
        CVector w = x; // extrapolated point
        double t = 1.0;
        double fx = smooth(x);
        double Fx = objective(x, fx);
        result.trace.push_back({0, Fx * scale * scale, std::sqrt(2.0 * fx) * scale});

        int it = 1;
        for (; it <= options.max_iter; ++it)
        {
            const CVector rw = V * w - b;
            const double fw = 0.5 * rw.squaredNorm();
            const CVector grad = V.adjoint() * rw;

            CVector z;
            double fz = 0.0;
            for (int guard = 0; guard < 60; ++guard)
            {
                z = prox_l1(w - grad / L, lam / L);
                fz = smooth(z);
                const CVector dz = z - w;
                const double model_f = fw + grad.dot(dz).real() + 0.5 * L * dz.squaredNorm();
                if (fz <= model_f + 1e-15 * std::max(1.0, std::abs(model_f)))
                    break;
                L *= 2.0;
            }

            const double Fz = objective(z, fz);
            x_prev = x;
            const double F_before = Fx;
            if (Fz <= Fx)
            {
                x = z;
                fx = fz;
                Fx = Fz;
            }
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            w = x + (t / t_next) * (z - x) + ((t - 1.0) / t_next) * (x - x_prev);
            t = t_next;

            result.trace.push_back({it, Fx * scale * scale, std::sqrt(2.0 * fx) * scale});

            const bool accepted = Fz <= F_before;
            if (accepted && F_before - Fx <= options.tol * std::max(Fx, 1e-300) &&
                lasso_kkt_violation(V, b, x, lam) <= options.kkt_tol)
            {
                result.converged = true;
                break;
            }
        }

        result.iterations = std::min(it, options.max_iter);
        result.coefficients = x * scale;
        result.residual_norm = (y - V * result.coefficients).norm();
        result.kkt_violation = lasso_kkt_violation(V, b, x, lam);
        for (Eigen::Index j = 0; j < x.size(); ++j)
            if (std::abs(x[j]) > 0.0)
                result.support.push_back(static_cast<std::size_t>(j));
        if (!result.converged)
        {
            result.warning = true;
            result.note = "LASSO did not converge within " + std::to_string(options.max_iter) + " iterations";
        }
        return result;
    }

    SparseResult omp(const CMatrix &V, const CVector &y, const OmpOptions &options)
    {
        if (options.max_support < 1)
            throw EstimationError("OMP needs max_support >= 1");
        if (V.rows() != y.size())
            throw EstimationError("measurement length does not match the sensing matrix");

        SparseResult result;
        result.coefficients = CVector::Zero(V.cols());
        CVector r = y;
        double r_norm = r.norm();
        const double y_norm = r_norm;
        result.trace.push_back({0, r_norm, r_norm});

        std::vector<bool> used(static_cast<std::size_t>(V.cols()), false);
        std::vector<std::size_t> active;
        CVector coef;
        const int limit = static_cast<int>(std::min<Eigen::Index>(options.max_support, V.cols()));

        if (y_norm == 0.0)
            result.converged = true;

        for (int step = 1; step <= limit && !result.converged; ++step)
        {
            const CVector corr = V.adjoint() * r;
            std::size_t pick = used.size();
            double best = 0.0;
            for (Eigen::Index j = 0; j < corr.size(); ++j)
            {
                const auto ju = static_cast<std::size_t>(j);
                const double c = std::abs(corr[j]);
                if (!used[ju] && c > best) // strict: smaller index wins ties
                {
                    best = c;
                    pick = ju;
                }
            }
            if (pick == used.size())
                break;

            active.push_back(pick);
            CMatrix A(V.rows(), static_cast<Eigen::Index>(active.size()));
            for (std::size_t m = 0; m < active.size(); ++m)
                A.col(static_cast<Eigen::Index>(m)) = V.col(static_cast<Eigen::Index>(active[m]));
            const Eigen::ColPivHouseholderQR<CMatrix> qr(A);
            if (qr.rank() < static_cast<Eigen::Index>(active.size()))
            {
                active.pop_back();
                result.warning = true;
                result.note = "OMP active set became rank deficient";
                break;
            }
            const CVector next_coef = qr.solve(y);
            const CVector next_r = y - A * next_coef;
            const double next_norm = next_r.norm();
            if (!(next_norm < r_norm))
            {
                active.pop_back();
                result.warning = true;
                result.note = "OMP residual stopped decreasing";
                break;
            }
            used[pick] = true;
            coef = next_coef;
            r = next_r;
            r_norm = next_norm;
            result.iterations = step;
            result.trace.push_back({step, r_norm, r_norm});
            if (r_norm <= options.residual_tol * y_norm)
                result.converged = true;
        }
        if (result.iterations == limit)
            result.converged = true;

        for (std::size_t m = 0; m < active.size(); ++m)
            result.coefficients[static_cast<Eigen::Index>(active[m])] = coef[static_cast<Eigen::Index>(m)];
        result.support = active;
        result.residual_norm = r_norm;
        return result;
    }

    SensingMatrixCache::SensingMatrixCache(ForwardModel model, AngleGrid angle_grid, int threads)
        : model_(std::move(model)), angle_grid_(std::move(angle_grid)), threads_(threads)
    {
    }

    const SensingMatrix &SensingMatrixCache::get(double range)
    {
        for (const auto &[r, m] : entries_)
            if (r == range)
                return *m;
        entries_.emplace_back(range,
                              std::make_unique<SensingMatrix>(build_sensing_matrix(model_, angle_grid_, range, threads_)));
        return *entries_.back().second;
    }

    namespace
    {
        SparseResult run_solver(const CMatrix &V, const CVector &y, const PipelineConfig &config, int max_support,
                                std::string &error)
        {
            if (config.solver == Solver::Omp)
            {
                OmpOptions opts;
                opts.max_support = max_support;
                return omp(V, y, opts);
            }
            LassoOptions opts;
            const double corr_max = (V.adjoint() * y).cwiseAbs().maxCoeff();
            opts.lambda = config.lambda.value_or(config.lambda_fraction * corr_max);
            opts.max_iter = config.max_iter;
            opts.tol = config.tol;
            opts.kkt_tol = config.kkt_tol;
            if (!(opts.lambda > 0.0))
            {
                error = "measurement has no energy on the sensing matrix";
                return {};
            }
            return lasso(V, y, opts);
        }

        // Fills angles / rcs / spectrum of `est` from coefficients[offset, offset + matrix.cols()).
        void extract_supports(RangeEstimate &est, const SensingMatrix &matrix, const SparseResult &solved,
                              Eigen::Index offset, int supports)
        {
            est.spectrum = CVector::Zero(static_cast<Eigen::Index>(matrix.angle_grid.size()));
            std::vector<std::size_t> order;
            for (std::size_t j = 0; j < matrix.cols(); ++j)
            {
                const cdouble c = solved.coefficients[offset + static_cast<Eigen::Index>(j)];
                est.spectrum[static_cast<Eigen::Index>(matrix.grid_index[j])] = std::abs(c);
                if (std::abs(c) > 0.0)
                    order.push_back(j);
            }
            // Strongest first; stable so the smaller angle index wins exact ties.
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(solved.coefficients[offset + static_cast<Eigen::Index>(a)]) >
                       std::abs(solved.coefficients[offset + static_cast<Eigen::Index>(b)]);
            });
            if (order.empty())
            {
                est.error = "solver returned an empty support for this range";
                return;
            }
            if (order.size() > static_cast<std::size_t>(supports))
                order.resize(static_cast<std::size_t>(supports));
            for (const std::size_t j : order)
            {
                const cdouble c = solved.coefficients[offset + static_cast<Eigen::Index>(j)];
                est.grid_indices.push_back(matrix.grid_index[j]);
                est.angles.push_back(matrix.column_angle(j));
                est.rcs_estimates.push_back(c / matrix.column_norms[j]);
            }
            est.ok = true;
        }
    }

    RangeEstimate estimate_range(const SensingMatrix &matrix, const CVector &y, const PipelineConfig &config)
    {
        RangeEstimate est;
        est.range = matrix.range;
        const int supports = std::max(config.supports_per_range, 1);
        est.solver = run_solver(matrix.columns, y, config, supports, est.error);
        if (!est.error.empty())
            return est;
        extract_supports(est, matrix, est.solver, 0, supports);
        return est;
    }

    std::vector<RangeEstimate> per_range_pipeline(const CVector &y, const std::vector<double> &ranges,
                                                  SensingMatrixCache &cache, const PipelineConfig &config)
    {
        std::vector<RangeEstimate> out(ranges.size());
        if (ranges.empty())
            return out;

        // Matrices are built up front (serially, each one internally parallel) so the solves below only read.
        std::vector<const SensingMatrix *> matrices(ranges.size(), nullptr);
        for (std::size_t m = 0; m < ranges.size(); ++m)
        {
            out[m].range = ranges[m];
            try
            {
                matrices[m] = &cache.get(ranges[m]);
            }
            catch (const Error &e)
            {
                out[m].error = e.what();
            }
        }

        if (config.mode == PipelineMode::Independent)
        {
            parallel_for(ranges.size(), config.threads, [&](std::size_t m) {
                if (matrices[m] == nullptr)
                    return;
                try
                {
                    out[m] = estimate_range(*matrices[m], y, config);
                }
                catch (const Error &e)
                {
                    out[m] = RangeEstimate{};
                    out[m].range = ranges[m];
                    out[m].error = e.what();
                }
            });
            return out;
        }

        std::vector<Eigen::Index> offsets(ranges.size(), 0);
        Eigen::Index total = 0;
        for (std::size_t m = 0; m < ranges.size(); ++m)
        {
            offsets[m] = total;
            if (matrices[m] != nullptr)
                total += static_cast<Eigen::Index>(matrices[m]->cols());
        }
        if (total == 0)
            return out;

        CMatrix stacked(y.size(), total);
        for (std::size_t m = 0; m < ranges.size(); ++m)
            if (matrices[m] != nullptr)
                stacked.middleCols(offsets[m], matrices[m]->columns.cols()) = matrices[m]->columns;

        const int supports = std::max(config.supports_per_range, 1);
        std::string error;
        SparseResult solved;
        try
        {
            solved = run_solver(stacked, y, config, supports * static_cast<int>(ranges.size()), error);
        }
        catch (const Error &e)
        {
            error = e.what();
        }

        for (std::size_t m = 0; m < ranges.size(); ++m)
        {
            if (matrices[m] == nullptr)
                continue;
            if (!error.empty())
            {
                out[m].error = error;
                continue;
            }
            RangeEstimate &est = out[m];
            const auto cols = static_cast<Eigen::Index>(matrices[m]->cols());
            est.solver = solved;
            est.solver.coefficients = solved.coefficients.segment(offsets[m], cols);
            est.solver.support.clear();
            for (const std::size_t j : solved.support)
                if (static_cast<Eigen::Index>(j) >= offsets[m] && static_cast<Eigen::Index>(j) < offsets[m] + cols)
                    est.solver.support.push_back(j - static_cast<std::size_t>(offsets[m]));
            extract_supports(est, *matrices[m], solved, offsets[m], supports);
        }
        return out;
    }
}
