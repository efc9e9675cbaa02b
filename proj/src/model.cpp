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

#include "metasense/model.hpp"
#include "metasense/errors.hpp"
#include "metasense/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace metasense
{
    AngleGrid::AngleGrid(std::vector<double> angles, bool allow_duplicates) : angles_(std::move(angles))
    {
        if (angles_.empty())
            throw ConfigError("angle grid is empty");
        for (std::size_t i = 0; i < angles_.size(); ++i)
        {
            const double a = angles_[i];
            if (!(a > 0.0 && a < kPi))
                throw ConfigError("grid angle " + std::to_string(rad2deg(a)) + " deg is outside (0, 180)");
            if (i > 0)
            {
                const double prev = angles_[i - 1];
                if (allow_duplicates ? a < prev : a <= prev)
                    throw ConfigError("angle grid must be increasing");
            }
        }
    }

    AngleGrid AngleGrid::uniform_degrees(double step_deg)
    {
        if (!(step_deg > 0.0) || !(step_deg < 90.0))
            throw ConfigError("angle step must be in (0, 90) degrees");
        std::vector<double> angles;
        for (long i = 1;; ++i)
        {
            const double deg = static_cast<double>(i) * step_deg;
            if (deg >= 180.0 - 1e-9)
                break;
            angles.push_back(deg2rad(deg));
        }
        return AngleGrid(std::move(angles));
    }

    double AngleGrid::step() const
    {
        return angles_.size() < 2 ? 0.0 : angles_[1] - angles_[0];
    }

    std::size_t AngleGrid::nearest(double theta) const
    {
        const auto it = std::lower_bound(angles_.begin(), angles_.end(), theta);
        if (it == angles_.begin())
            return 0;
        if (it == angles_.end())
            return angles_.size() - 1;
        const auto hi = static_cast<std::size_t>(it - angles_.begin());
        return (theta - angles_[hi - 1]) <= (angles_[hi] - theta) ? hi - 1 : hi;
    }

    Target target_from_range(const ForwardModel &model, double theta, double p, double rcs)
    {
        const double s = s1_from_range(model.scene, p, theta, model.root);
        return Target{polar_to_point(model.scene, {theta, s}), rcs};
    }

    CVector model_vector(const ForwardModel &model, double theta, double p, double rcs)
    {
        return twopath_echo(model.grid, model.scene, model.surfaces, target_from_range(model, theta, p, rcs));
    }

    std::optional<std::size_t> SensingMatrix::column_of(std::size_t grid_idx) const
    {
        const auto it = std::lower_bound(grid_index.begin(), grid_index.end(), grid_idx);
        if (it == grid_index.end() || *it != grid_idx)
            return std::nullopt;
        return static_cast<std::size_t>(it - grid_index.begin());
    }

    SensingMatrix build_sensing_matrix(const ForwardModel &model, const AngleGrid &angle_grid, double p, int threads)
    {
        SensingMatrix out;
        out.angle_grid = angle_grid;
        out.grid = model.grid;
        out.range = p;
        out.feasible.assign(angle_grid.size(), false);

        for (std::size_t i = 0; i < angle_grid.size(); ++i)
        {
            out.feasible[i] = range_is_feasible(model.scene, p, angle_grid[i]);
            if (out.feasible[i])
                out.grid_index.push_back(i);
        }
        if (out.grid_index.empty())
            throw EstimationError("no candidate angle is feasible for range " + std::to_string(p) + " m");

        const auto rows = static_cast<Eigen::Index>(model.grid.size());
        out.columns.resize(rows, static_cast<Eigen::Index>(out.grid_index.size()));
        out.column_norms.assign(out.grid_index.size(), 0.0);

        parallel_for(out.grid_index.size(), threads, [&](std::size_t j) {
            CVector v = model_vector(model, angle_grid[out.grid_index[j]], p, 1.0);
            const double n = v.norm();
            out.column_norms[j] = n;
            out.columns.col(static_cast<Eigen::Index>(j)) = n > 0.0 ? CVector(v / n) : v;
        });

        for (std::size_t j = 0; j < out.column_norms.size(); ++j)
            if (!(out.column_norms[j] > 0.0))
                throw EstimationError("model vector at " + std::to_string(rad2deg(out.column_angle(j))) +
                                      " deg has zero energy");
        return out;
    }

    CoherenceReport mutual_coherence(const SensingMatrix &matrix, const std::vector<std::size_t> &columns)
    {
        std::vector<std::size_t> selected = columns;
        if (selected.empty())
        {
            selected.resize(matrix.cols());
            for (std::size_t j = 0; j < selected.size(); ++j)
                selected[j] = j;
        }
        if (selected.size() < 2)
            throw EstimationError("coherence needs at least two feasible columns");

        CMatrix sub(matrix.columns.rows(), static_cast<Eigen::Index>(selected.size()));
        CoherenceReport report;
        for (std::size_t j = 0; j < selected.size(); ++j)
        {
            sub.col(static_cast<Eigen::Index>(j)) = matrix.columns.col(static_cast<Eigen::Index>(selected[j]));
            report.angles.push_back(matrix.column_angle(selected[j]));
        }

        report.gram = (sub.adjoint() * sub).cwiseAbs();
        double best = -1.0;
        for (Eigen::Index j = 0; j < report.gram.rows(); ++j)
        {
            report.gram(j, j) = 1.0;
            for (Eigen::Index l = j + 1; l < report.gram.cols(); ++l)
            {
                const double g = std::min(report.gram(j, l), 1.0);
                report.gram(j, l) = report.gram(l, j) = g;
                if (g > best)
                {
                    best = g;
                    report.argmax_pair = {report.angles[static_cast<std::size_t>(j)],
                                          report.angles[static_cast<std::size_t>(l)]};
                }
            }
        }
        report.mu = best;
        return report;
    }

    std::vector<bool> high_gain_region(const ForwardModel &model, const AngleGrid &angle_grid,
                                       const std::vector<double> &wavenumbers, double db_down)
    {
        const double theta_in = model.scene.incidence_angle();
        const double fraction = std::pow(10.0, -db_down / 20.0);
        std::vector<bool> region(angle_grid.size(), false);

        for (const Surface *surface : {&model.surfaces.first, &model.surfaces.second})
        {
            if (surface->weight == 0.0)
                continue;
            std::vector<double> ks = wavenumbers;
            if (ks.empty())
                ks.push_back(surface->profile.design_wavenumber() > 0.0 ? surface->profile.design_wavenumber()
                                                                        : model.grid.waveform().carrier_wavenumber());
            const CVector psi = surface->profile.phasors();
            const double threshold = fraction * surface->ula.elements;
            for (const double k : ks)
                for (std::size_t i = 0; i < angle_grid.size(); ++i)
                    if (!region[i] && std::abs(pattern_gain(psi, surface->ula, k, theta_in, angle_grid[i])) >= threshold)
                        region[i] = true;
        }
        return region;
    }

    std::vector<SquintPoint> squint_sweep(const ForwardModel &model, const AngleGrid &angle_grid, double p,
                                          const std::vector<double> &bandwidths_hz, int threads, double db_down)
    {
        if (bandwidths_hz.empty())
            throw ConfigError("bandwidth list is empty");
        WaveformSpec widest = model.grid.waveform();
        widest.bandwidth_hz = *std::max_element(bandwidths_hz.begin(), bandwidths_hz.end());
        widest.validate();
        const std::vector<bool> region = high_gain_region(model, angle_grid, FrequencyGrid(widest).wavenumbers(), db_down);

        std::vector<SquintPoint> out;
        out.reserve(bandwidths_hz.size());
        for (const double bw : bandwidths_hz)
        {
            WaveformSpec spec = model.grid.waveform();
            spec.bandwidth_hz = bw;
            spec.validate();
            ForwardModel swept = model;
            swept.grid = FrequencyGrid(spec);

            SquintPoint point;
            point.bandwidth_hz = bw;
            point.matrix = build_sensing_matrix(swept, angle_grid, p, threads);
            point.full = mutual_coherence(point.matrix);

            std::vector<std::size_t> cols;
            for (std::size_t j = 0; j < point.matrix.cols(); ++j)
                if (region[point.matrix.grid_index[j]])
                    cols.push_back(j);
            if (cols.size() >= 2)
                point.region = mutual_coherence(point.matrix, cols);
            else
                point.region.mu = std::numeric_limits<double>::quiet_NaN();
            out.push_back(std::move(point));
        }
        return out;
    }
}
