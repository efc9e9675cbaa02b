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

#ifndef METASENSE_ARRAY_HPP
#define METASENSE_ARRAY_HPP

#include "metasense/geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace metasense
{
    using cdouble = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;

    // Uniform linear array. Elements are indexed around the array center,
    // m_bar = m - (N - 1) / 2, so the center is the phase reference.
    struct UlaSpec
    {
        int elements = 1;     // N >= 1
        double spacing = 0.0; // delta [m] > 0

        void validate() const;
        double centered_index(int m) const { return m - 0.5 * (elements - 1); }
    };

    // Element m: exp(-j k m_bar delta cos(theta)).
    CVector steering_vector(const UlaSpec &ula, double k, double theta);

    // Fixed per-element phase shifts (the diagonal of Psi). Unit amplitude by construction.
    class PhaseProfile
    {
    public:
        PhaseProfile() = default;
        PhaseProfile(std::vector<double> phases, double steer, double design_wavenumber, double design_incidence);

        static PhaseProfile identity(int elements);

        const std::vector<double> &phases() const { return phases_; }
        std::size_t size() const { return phases_.size(); }
        double steer() const { return steer_; }
        double design_wavenumber() const { return design_k_; }
        double design_incidence() const { return design_incidence_; }

        CVector phasors() const;

    private:
        std::vector<double> phases_;
        double steer_ = kPi / 2;
        double design_k_ = 0.0;
        double design_incidence_ = kPi / 2;
    };

    // Profile that reflects a wave arriving with incidence angle `incidence` into `steer` at k_design:
    //     psi_m = arg( a_m(steer) * conj(a_m(incidence)) ),
    // so pattern_gain(profile, ula, k_design, incidence, steer) == N. For broadside incidence the
    // phases reduce to those of a(steer).
    PhaseProfile beamform_profile(const UlaSpec &ula, double k_design, double steer,
                                  double incidence = kPi / 2);

    // Psi a(theta_in). Throws ConfigError if the profile length does not match the array.
    CVector effective_response(const PhaseProfile &profile, const UlaSpec &ula, double k, double theta_in);

    // a(theta_out)^H Psi a(theta_in); |.| <= N.
    cdouble pattern_gain(const PhaseProfile &profile, const UlaSpec &ula, double k, double theta_in,
                         double theta_out);

    // Same sum with precomputed phasors; the hot path used by the synthesizer.
    cdouble pattern_gain(const CVector &phasors, const UlaSpec &ula, double k, double theta_in, double theta_out);

    // One metasurface: array geometry, its fixed profile and a weight (0 mutes the surface).
    struct Surface
    {
        UlaSpec ula;
        PhaseProfile profile;
        double weight = 1.0;
    };

    struct SurfacePair
    {
        Surface first;
        Surface second;
    };
}

#endif
