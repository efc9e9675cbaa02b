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

#ifndef METASENSE_ESTIMATE_HPP
#define METASENSE_ESTIMATE_HPP

#include "metasense/model.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace metasense
{
    // Known range and RCS of one target (from prior range processing).
    struct RangePrior
    {
        double range = 0.0; // p [m]
        double rcs = 1.0;   // sigma
    };

    struct BruteForceOptions
    {
        // Fit the best complex amplitude per candidate instead of using the prior sigma as is.
        bool amplitude_refit = false;
        // Maximum number of angle tuples evaluated (Theta^M).
        std::uint64_t budget = 10'000'000;
        int threads = 1;
    };

    struct BruteForceResult
    {
        std::vector<double> best_angles;         // one per target [rad]
        std::vector<std::size_t> best_indices;   // angle-grid indices
        double best_loss = 0.0;
        // Row-major residual norms over the full Theta^M grid; NaN where a candidate is infeasible.
        // For M = 2, entry (i, j) is loss(angle_i for target 1, angle_j for target 2).
        std::vector<double> loss_surface;
        std::vector<std::size_t> shape;
        AngleGrid angle_grid;
        std::uint64_t evaluated = 0;
        double seconds = 0.0;
    };

    // argmin_theta || y - v_theta ||_2 over the grid. Throws EstimationError if nothing is feasible.
    BruteForceResult brute_force_single(const CVector &y, const ForwardModel &model, const RangePrior &prior,
                                        const AngleGrid &angle_grid, const BruteForceOptions &options = {});

    // Exhaustive search over all angle tuples against the summed forward model. Throws
    // EstimationError when Theta^M exceeds options.budget (the message states the required budget).
    BruteForceResult brute_force_multi(const CVector &y, const ForwardModel &model,
                                       const std::vector<RangePrior> &priors, const AngleGrid &angle_grid,
                                       const BruteForceOptions &options = {});

    // z max(1 - t / |z|, 0)
    cdouble soft_threshold(cdouble z, double t);

    struct TraceEntry
    {
        int iteration = 0;
        double objective = 0.0;
        double residual = 0.0; // ||y - V x||_2
    };

    struct SparseResult
    {
        CVector coefficients;
        std::vector<std::size_t> support; // column indices, selection order for OMP, ascending for LASSO
        double residual_norm = 0.0;
        std::vector<TraceEntry> trace;
        int iterations = 0;
        bool converged = false;
        bool warning = false;
        std::string note;
        double lambda = 0.0;
        double kkt_violation = 0.0; // LASSO only, see lasso_kkt_violation
    };

    struct LassoOptions
    {
        double lambda = 0.0; // > 0
        int max_iter = 5000;
        double tol = 1e-10;     // relative objective change
        double kkt_tol = 1e-7;  // also required before stopping, see lasso_kkt_violation
        int power_iterations = 20;
        double power_tol = 1e-6;
    };

    // Minimizes 0.5 ||y - V x||^2 + lambda ||x||_1 by monotone accelerated proximal gradient
    // (step 1/L, L from power iteration on V^H V, doubled whenever the sufficient-decrease test fails).
    // Non-convergence within max_iter sets `warning`.
    SparseResult lasso(const CMatrix &V, const CVector &y, const LassoOptions &options);

    // Largest KKT violation relative to lambda: for active entries |g_j + lambda x_j/|x_j||, for
    // inactive entries max(|g_j| - lambda, 0), with g = V^H (V x - y).
    double lasso_kkt_violation(const CMatrix &V, const CVector &y, const CVector &x, double lambda);

    // Largest power iteration estimate of ||V||_2^2.
    double spectral_norm_squared(const CMatrix &V, int iterations, double tol);

    struct OmpOptions
    {
        int max_support = 1;
        double residual_tol = 0.0; // stop once ||r|| <= residual_tol * ||y||
    };

    // Greedy selection of the column with the largest |<v_j, r>| (columns assumed unit norm), least
    // squares refit on the active set each step. A rank-deficient active set stops with a warning.
    SparseResult omp(const CMatrix &V, const CVector &y, const OmpOptions &options);

    enum class Solver
    {
        Lasso,
        Omp
    };

    enum class PipelineMode
    {
        // Per-range matrices stacked into one dictionary, one solve, one support block per range.
        Joint,
        // One solve per range on that range's matrix alone.
        Independent
    };

    struct PipelineConfig
    {
        Solver solver = Solver::Lasso;
        PipelineMode mode = PipelineMode::Joint;
        double lambda_fraction = 0.1; // lambda = fraction * ||V^H y||_inf
        std::optional<double> lambda; // absolute override
        int max_iter = 5000;
        double tol = 1e-10;
        // KKT gate on the LASSO stopping rule; off by default since only the dominant support is used.
        double kkt_tol = std::numeric_limits<double>::infinity();
        int supports_per_range = 1;
        int threads = 1;
    };

    struct RangeEstimate
    {
        double range = 0.0;
        bool ok = false;
        std::string error;
        std::vector<double> angles;         // dominant support angles [rad], strongest first
        std::vector<std::size_t> grid_indices;
        std::vector<cdouble> rcs_estimates; // coefficient / column norm
        SparseResult solver;
        CVector spectrum;                   // |x| per angle-grid entry (0 where infeasible)
    };

    // Cache of per-range sensing matrices; building them dominates the pipeline cost.
    class SensingMatrixCache
    {
    public:
        SensingMatrixCache(ForwardModel model, AngleGrid angle_grid, int threads = 1);
        const SensingMatrix &get(double range);
        const ForwardModel &model() const { return model_; }
        const AngleGrid &angle_grid() const { return angle_grid_; }

    private:
        ForwardModel model_;
        AngleGrid angle_grid_;
        int threads_;
        std::vector<std::pair<double, std::unique_ptr<SensingMatrix>>> entries_; // stable addresses
    };

    // Runs the sparse solver on one range's sensing matrix and extracts the dominant supports.
    RangeEstimate estimate_range(const SensingMatrix &matrix, const CVector &y, const PipelineConfig &config);

    // One sensing matrix per range; solved jointly or independently per config.mode. Failures are
    // reported per range and the remaining ranges continue. An empty range list gives an empty result.
    std::vector<RangeEstimate> per_range_pipeline(const CVector &y, const std::vector<double> &ranges,
                                                  SensingMatrixCache &cache, const PipelineConfig &config);
}

#endif
