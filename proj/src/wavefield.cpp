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

#include "metasense/wavefield.hpp"
#include "metasense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace metasense
{
    void WaveformSpec::validate() const
    {
        if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
            throw ConfigError("carrier frequency must be positive");
        if (!(bandwidth_hz > 0.0) || !(bandwidth_hz < carrier_hz))
            throw ConfigError("bandwidth must satisfy 0 < beta < f_c");
        if (!(duration_s > 0.0) || !std::isfinite(duration_s))
            throw ConfigError("chirp duration must be positive");
        if (samples < 2)
            throw ConfigError("at least two fast-time samples are required");
    }

    FrequencyGrid::FrequencyGrid(const WaveformSpec &spec) : spec_(spec)
    {
        spec.validate();
        k_.resize(static_cast<std::size_t>(spec.samples));
        const double last = static_cast<double>(spec.samples - 1);
        for (int i = 0; i < spec.samples; ++i)
            k_[static_cast<std::size_t>(i)] =
                2.0 * kPi * (spec.carrier_hz + spec.bandwidth_hz * (i / last)) / kSpeedOfLight;
    }

    double FrequencyGrid::fast_time(std::size_t i) const
    {
        return spec_.duration_s * (static_cast<double>(i) / static_cast<double>(k_.size() - 1));
    }

    namespace
    {
        // exp(j 2 pi cycles) with the integer part removed first.
        cdouble phasor_cycles(double cycles)
        {
            const double frac = cycles - std::floor(cycles);
            return std::polar(1.0, 2.0 * kPi * frac);
        }

        double instantaneous_wavenumber(double tau, const WaveformSpec &spec)
        {
            return 2.0 * kPi * (spec.carrier_hz + spec.chirp_rate() * tau) / kSpeedOfLight;
        }
    }

    cdouble fmcw_tx(double tau, const WaveformSpec &spec)
    {
        return phasor_cycles(spec.carrier_hz * tau + 0.5 * spec.chirp_rate() * tau * tau);
    }

    cdouble fmcw_echo(double tau, double range, double rcs, const WaveformSpec &spec)
    {
        const double tau0 = range / kSpeedOfLight;
        const double rate = spec.chirp_rate();
        const double k = instantaneous_wavenumber(tau, spec);
        const double rho = range > 0.0 ? rcs / (4.0 * k * k * range * range) : rcs;
        const cdouble shift = phasor_cycles(-spec.carrier_hz * tau0 - rate * tau0 * tau + 0.5 * rate * tau0 * tau0);
        return rho * fmcw_tx(tau, spec) * shift;
    }

    double dechirp_validate(const WaveformSpec &spec, double range, double rcs)
    {
        spec.validate();
        const FrequencyGrid grid(spec);
        const double tau0 = range / kSpeedOfLight;
        const cdouble rvp_removal = phasor_cycles(-0.5 * spec.chirp_rate() * tau0 * tau0);

        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            const double tau = grid.fast_time(i);
            // rho is real and positive; only the phase is compared, so a unit amplitude is used at R0 = 0
            const cdouble echo = range > 0.0 ? fmcw_echo(tau, range, rcs, spec) : fmcw_tx(tau, spec);
            const cdouble baseband = echo * std::conj(fmcw_tx(tau, spec)) * rvp_removal;
            const cdouble model = std::polar(1.0, -grid[i] * range);
            worst = std::max(worst, std::abs(std::arg(baseband * std::conj(model))));
        }
        return worst;
    }

    CVector direct_echo(const FrequencyGrid &grid, double p, double rcs)
    {
        if (!(p > 0.0))
            throw GeometryError("direct path length must be positive");
        CVector y(static_cast<Eigen::Index>(grid.size()));
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            const double k = grid[i];
            y[static_cast<Eigen::Index>(i)] = std::polar(rcs / (4.0 * k * k * p * p), -k * p);
        }
        return y;
    }

    CVector twopath_echo(const FrequencyGrid &grid, const SceneGeometry &scene, const SurfacePair &surfaces,
                         const Target &target)
    {
        const PathLengths paths = exact_path_lengths(scene, target.position);
        const FarFieldAngles angles = far_field_angles(scene, target.position);
        const double theta = angles.theta;
        const double theta_in = angles.theta_in;
        const double d = scene.separation();
        const double delta = d * (std::cos(theta_in) - std::cos(theta));
        const double total = paths.t1 + paths.s1 + paths.p;
        const double geometric = paths.t1 * paths.t1 * paths.s1 * paths.s1 * paths.p * paths.p;

        const CVector psi1 = surfaces.first.profile.phasors();
        const CVector psi2 = surfaces.second.profile.phasors();

        CVector y(static_cast<Eigen::Index>(grid.size()));
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            const double k = grid[i];
            const double k2 = k * k;
            const double rho = target.rcs / (64.0 * k2 * k2 * k2 * geometric);

            cdouble bracket = 0.0;
            if (surfaces.first.weight != 0.0)
                bracket += surfaces.first.weight * pattern_gain(psi1, surfaces.first.ula, k, theta_in, theta);
            if (surfaces.second.weight != 0.0)
                bracket += surfaces.second.weight * pattern_gain(psi2, surfaces.second.ula, k, theta_in, theta) *
                           std::polar(1.0, -k * delta);

            y[static_cast<Eigen::Index>(i)] = rho * bracket * std::polar(1.0, -k * total);
        }
        return y;
    }

    Measurement add_noise(const FrequencyGrid &grid, const CVector &noise_free, const NoiseSpec &noise)
    {
        Measurement out;
        out.grid = grid;
        out.noise_free = noise_free;
        out.samples = noise_free;
        out.snr_db = noise.snr_db;
        out.seed = noise.seed;

        if (std::isinf(noise.snr_db) && noise.snr_db > 0.0)
            return out;
        if (std::isnan(noise.snr_db))
            throw ConfigError("SNR must be a number or +inf");

        const double power = noise_free.squaredNorm() / static_cast<double>(noise_free.size());
        out.noise_variance = power / std::pow(10.0, noise.snr_db / 10.0);
        if (!(out.noise_variance > 0.0))
            return out;

        std::mt19937_64 rng(noise.seed);
        std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * out.noise_variance));
        for (Eigen::Index i = 0; i < out.samples.size(); ++i)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            out.samples[i] += cdouble(re, im);
        }
        return out;
    }

    Measurement multi_target_echo(const FrequencyGrid &grid, const SceneGeometry &scene, const SurfacePair &surfaces,
                                  std::span<const Target> targets, const NoiseSpec &noise)
    {
        if (targets.empty())
            throw ConfigError("at least one target is required");
        CVector sum = CVector::Zero(static_cast<Eigen::Index>(grid.size()));
        for (const Target &t : targets)
            sum += twopath_echo(grid, scene, surfaces, t);
        return add_noise(grid, sum, noise);
    }
}
