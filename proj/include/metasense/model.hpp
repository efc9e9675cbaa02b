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

#ifndef METASENSE_MODEL_HPP
#define METASENSE_MODEL_HPP

#include "metasense/wavefield.hpp"

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace metasense
{
    // Candidate angles [rad], strictly increasing, inside (0, pi).
    class AngleGrid
    {
    public:
        AngleGrid() = default;
        explicit AngleGrid(std::vector<double> angles, bool allow_duplicates = false);

        // step_deg, 2 step_deg, ... up to (but excluding) 180 deg.
        static AngleGrid uniform_degrees(double step_deg);

        const std::vector<double> &angles() const { return angles_; }
        std::size_t size() const { return angles_.size(); }
        double operator[](std::size_t i) const { return angles_[i]; }
        double step() const; // spacing of the first two entries [rad]

        // Index of the grid angle closest to theta.
        std::size_t nearest(double theta) const;

    private:
        std::vector<double> angles_;
    };

    // Everything the estimator knows about the scene besides the measurement.
    struct ForwardModel
    {
        FrequencyGrid grid;
        SceneGeometry scene;
        SurfacePair surfaces;
        RangeRoot root = RangeRoot::Near;
    };

    // Target implied by a candidate angle and a known radar range.
    Target target_from_range(const ForwardModel &model, double theta, double p, double rcs);

    // twopath_echo for the target at (theta, p). Throws InfeasibleRangeError.
    CVector model_vector(const ForwardModel &model, double theta, double p, double rcs);

    // Normalized model vectors (sigma = 1) for one range. Infeasible angles get no column.
    struct SensingMatrix
    {
        CMatrix columns;                  // K x (feasible count), unit-norm columns
        std::vector<double> column_norms; // norms before normalization
        std::vector<std::size_t> grid_index; // column -> angle_grid index
        std::vector<bool> feasible;       // per angle_grid entry
        AngleGrid angle_grid;
        FrequencyGrid grid;
        double range = 0.0;

        std::size_t cols() const { return grid_index.size(); }
        double column_angle(std::size_t j) const { return angle_grid[grid_index[j]]; }
        std::optional<std::size_t> column_of(std::size_t grid_idx) const;
    };

    // Throws EstimationError when no angle is feasible for range p.
    SensingMatrix build_sensing_matrix(const ForwardModel &model, const AngleGrid &angle_grid, double p,
                                       int threads = 1);

    struct CoherenceReport
    {
        double mu = 0.0;
        std::pair<double, double> argmax_pair{0.0, 0.0}; // angles [rad]
        std::vector<double> angles;                      // angles of the analysed columns
        Eigen::MatrixXd gram;                            // |<v_j, v_l>|, unit diagonal
    };

    // Largest off-diagonal |<v_j, v_l>| over the selected columns (all when `columns` is empty).
    // Throws EstimationError with fewer than two columns.
    CoherenceReport mutual_coherence(const SensingMatrix &matrix, const std::vector<std::size_t> &columns = {});

    // Angles where either surface's |pattern_gain| comes within `db_down` of its peak N at any of
    // the given wavenumbers (the design wavenumber only when the list is empty).
    std::vector<bool> high_gain_region(const ForwardModel &model, const AngleGrid &angle_grid,
                                       const std::vector<double> &wavenumbers = {}, double db_down = 3.0);

    struct SquintPoint
    {
        double bandwidth_hz = 0.0;
        SensingMatrix matrix;
        CoherenceReport full;   // all feasible columns
        CoherenceReport region; // shared high-gain region; mu is NaN with fewer than two columns there
    };

    // Rebuilds the frequency grid for each bandwidth (same carrier, duration and K). The region
    // is the high-gain region swept over the widest bandwidth, identical for every point.
    std::vector<SquintPoint> squint_sweep(const ForwardModel &model, const AngleGrid &angle_grid, double p,
                                          const std::vector<double> &bandwidths_hz, int threads = 1,
                                          double db_down = 3.0);
}

#endif
