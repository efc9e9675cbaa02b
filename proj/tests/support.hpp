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

// Shared fixtures and independent oracles for the test programs.

#ifndef METASENSE_TESTS_SUPPORT_HPP
#define METASENSE_TESTS_SUPPORT_HPP

#include "metasense/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace testing
{
    using namespace metasense;

    // 240 GHz carrier, radar (0, 4), surfaces (+-0.1, 0), steering 15 / 75 deg.
    inline ForwardModel reference_model(double bandwidth_hz = 10e9, int elements = 256, int samples = 128)
    {
        WaveformSpec w;
        w.bandwidth_hz = bandwidth_hz;
        w.samples = samples;
        const SceneGeometry scene({0.0, 4.0}, {-0.1, 0.0}, {0.1, 0.0});
        const double kc = w.carrier_wavenumber();
        const UlaSpec ula{elements, kPi / kc};
        SurfacePair pair{{ula, beamform_profile(ula, kc, deg2rad(15.0), scene.incidence_angle()), 1.0},
                         {ula, beamform_profile(ula, kc, deg2rad(75.0), scene.incidence_angle()), 1.0}};
        return ForwardModel{FrequencyGrid(w), scene, pair, RangeRoot::Near};
    }

    inline Target polar_target(const SceneGeometry &scene, double theta_deg, double s, double rcs = 1.0)
    {
        return {polar_to_point(scene, {deg2rad(theta_deg), s}), rcs};
    }

    // Explicit element-by-element propagation: radar -> element -> target -> radar with exact
    // distances, per-element phase shifts and per-element free-space loss
    // sigma / (64 k^6 t_m^2 s_m^2 p^2).
    inline std::vector<std::complex<double>> element_sum(const FrequencyGrid &grid, const SceneGeometry &scene,
                                                         const SurfacePair &pair, const Target &target)
    {
        const Point2 r = scene.radar(), x = target.position;
        const double p = std::hypot(r.x - x.x, r.y - x.y);
        const double ux = scene.surface2().x - scene.surface1().x, uy = scene.surface2().y - scene.surface1().y;
        const double ul = std::hypot(ux, uy);
        std::vector<std::complex<double>> out(grid.size(), 0.0);
        const Surface *surfaces[2] = {&pair.first, &pair.second};
        const Point2 centers[2] = {scene.surface1(), scene.surface2()};
        for (int s = 0; s < 2; ++s)
        {
            const Surface &sf = *surfaces[s];
            const int n = sf.ula.elements;
            for (int m = 0; m < n; ++m)
            {
                const double off = (m - 0.5 * (n - 1)) * sf.ula.spacing;
                const double ex = centers[s].x + off * ux / ul, ey = centers[s].y + off * uy / ul;
                const double tm = std::hypot(r.x - ex, r.y - ey);
                const double sm = std::hypot(x.x - ex, x.y - ey);
                const double psi = sf.profile.phases()[static_cast<std::size_t>(m)];
                for (std::size_t i = 0; i < grid.size(); ++i)
                {
                    const double k = grid[i];
                    const double amp = sf.weight * target.rcs / (64.0 * std::pow(k, 6) * tm * tm * sm * sm * p * p);
                    // Path phase reduced modulo 2 pi before adding the element phase.
                    const double phase = psi - std::fmod(k * (tm + sm + p), 2.0 * kPi);
                    out[i] += std::polar(amp, phase);
                }
            }
        }
        return out;
    }

    // Small scene where every target is in the far field of both arrays: 4 elements at half
    // wavelength, surfaces 5 mm apart, radar 30 m away.
    inline ForwardModel scaled_model(double bandwidth_hz = 10e9, int samples = 128)
    {
        WaveformSpec w;
        w.bandwidth_hz = bandwidth_hz;
        w.samples = samples;
        const SceneGeometry scene({0.0, 30.0}, {-0.0025, 0.0}, {0.0025, 0.0});
        const double kc = w.carrier_wavenumber();
        const UlaSpec ula{4, kPi / kc};
        SurfacePair pair{{ula, beamform_profile(ula, kc, deg2rad(15.0), scene.incidence_angle()), 1.0},
                         {ula, beamform_profile(ula, kc, deg2rad(75.0), scene.incidence_angle()), 1.0}};
        return ForwardModel{FrequencyGrid(w), scene, pair, RangeRoot::Near};
    }

    struct OracleErrors
    {
        double amplitude = 0.0; // max ||y| - |o|| / max|o|
        double phase = 0.0;     // max |arg(y conj(o))| where |o| >= half of max|o|
    };

    inline OracleErrors compare_with_oracle(const CVector &y, const std::vector<std::complex<double>> &oracle)
    {
        double peak = 0.0;
        for (const auto &o : oracle)
            peak = std::max(peak, std::abs(o));
        OracleErrors e;
        for (std::size_t i = 0; i < oracle.size(); ++i)
        {
            const auto yi = y[static_cast<Eigen::Index>(i)];
            e.amplitude = std::max(e.amplitude, std::abs(std::abs(yi) - std::abs(oracle[i])) / peak);
            if (std::abs(oracle[i]) >= 0.5 * peak)
                e.phase = std::max(e.phase, std::abs(std::arg(yi * std::conj(oracle[i]))));
        }
        return e;
    }

    inline double max_abs_diff_deg(double a_rad, double b_rad) { return std::abs(rad2deg(a_rad) - rad2deg(b_rad)); }
}

#endif
