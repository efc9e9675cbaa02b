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

#ifndef METASENSE_WAVEFIELD_HPP
#define METASENSE_WAVEFIELD_HPP

#include "metasense/array.hpp"
#include "metasense/geometry.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace metasense
{
    // Linear up-chirp: instantaneous frequency f_c + (beta / T) tau for tau in [0, T].
    struct WaveformSpec
    {
        double carrier_hz = 240e9;
        double bandwidth_hz = 10e9;
        double duration_s = 50e-6;
        int samples = 128; // K, fast-time samples per chirp

        void validate() const;
        double chirp_rate() const { return bandwidth_hz / duration_s; }
        double carrier_wavenumber() const { return 2.0 * kPi * carrier_hz / kSpeedOfLight; }
    };

    // Wavenumbers swept by one chirp, k_i = 2 pi (f_c + beta i / (K - 1)) / c. Strictly increasing.
    class FrequencyGrid
    {
    public:
        FrequencyGrid() = default;
        explicit FrequencyGrid(const WaveformSpec &spec);

        const WaveformSpec &waveform() const { return spec_; }
        const std::vector<double> &wavenumbers() const { return k_; }
        std::size_t size() const { return k_.size(); }
        double operator[](std::size_t i) const { return k_[i]; }
        double fast_time(std::size_t i) const;

    private:
        WaveformSpec spec_;
        std::vector<double> k_;
    };

    // Unit-amplitude transmit chirp exp(j 2 pi f_c tau + j pi (beta/T) tau^2).
    cdouble fmcw_tx(double tau, const WaveformSpec &spec);

    // Point-target echo with delay R0 / c and free-space coefficient sigma / (4 k(tau)^2 R0^2).
    // R0 is the total accumulated path length; no round-trip factor is applied.
    cdouble fmcw_echo(double tau, double range, double rcs, const WaveformSpec &spec);

    // Dechirps the time-domain echo at the K fast-time samples, removes the residual video phase
    // and returns the largest phase deviation [rad] from the baseband model exp(-j k_i R0).
    double dechirp_validate(const WaveformSpec &spec, double range, double rcs);

    // sigma / (4 k^2 p^2) exp(-j k p) per sample.
    CVector direct_echo(const FrequencyGrid &grid, double p, double rcs);

    // Noise-free echo over the surface path for one target:
    //     rho(k) [w1 g1(k) + w2 g2(k) exp(-j k Delta)] exp(-j k (t1 + s1 + p))
    // with g_i = a(theta)^H Psi_i a(theta_in), Delta = d (cos theta_in - cos theta) and
    // rho(k) = sigma / (64 k^6 t1^2 s1^2 p^2). t1, s1 and p are exact center distances.
    CVector twopath_echo(const FrequencyGrid &grid, const SceneGeometry &scene, const SurfacePair &surfaces,
                         const Target &target);

    struct NoiseSpec
    {
        double snr_db = std::numeric_limits<double>::infinity(); // +inf disables noise
        std::uint64_t seed = 0;
    };

    struct Measurement
    {
        FrequencyGrid grid;
        CVector samples;    // y
        CVector noise_free; // sum of target echoes
        double snr_db = std::numeric_limits<double>::infinity();
        std::uint64_t seed = 0;
        double noise_variance = 0.0; // per complex sample, E|n|^2
    };

    // Sum of twopath_echo over targets plus circular white Gaussian noise with
    // E|n|^2 = mean_i |noise_free_i|^2 / 10^(snr_db / 10). Targets are summed in order.
    Measurement multi_target_echo(const FrequencyGrid &grid, const SceneGeometry &scene, const SurfacePair &surfaces,
                                  std::span<const Target> targets, const NoiseSpec &noise);

    // Adds noise to an existing noise-free vector (used by Monte-Carlo runs that reuse one synthesis).
    Measurement add_noise(const FrequencyGrid &grid, const CVector &noise_free, const NoiseSpec &noise);
}

#endif
