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

#include "metasense/array.hpp"
#include "metasense/errors.hpp"

#include <cmath>
#include <string>

namespace metasense
{
    void UlaSpec::validate() const
    {
        if (elements < 1)
            throw ConfigError("array needs at least one element");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw ConfigError("element spacing must be positive");
    }

    CVector steering_vector(const UlaSpec &ula, double k, double theta)
    {
        ula.validate();
        CVector a(ula.elements);
        const double phase_step = k * ula.spacing * std::cos(theta);
        for (int m = 0; m < ula.elements; ++m)
            a[m] = std::polar(1.0, -phase_step * ula.centered_index(m));
        return a;
    }

    PhaseProfile::PhaseProfile(std::vector<double> phases, double steer, double design_wavenumber,
                               double design_incidence)
        : phases_(std::move(phases)), steer_(steer), design_k_(design_wavenumber), design_incidence_(design_incidence)
    {
    }

    PhaseProfile PhaseProfile::identity(int elements)
    {
        return PhaseProfile(std::vector<double>(static_cast<std::size_t>(elements), 0.0), kPi / 2, 0.0, kPi / 2);
    }

    CVector PhaseProfile::phasors() const
    {
        CVector out(static_cast<Eigen::Index>(phases_.size()));
        for (std::size_t m = 0; m < phases_.size(); ++m)
            out[static_cast<Eigen::Index>(m)] = std::polar(1.0, phases_[m]);
        return out;
    }

    PhaseProfile beamform_profile(const UlaSpec &ula, double k_design, double steer, double incidence)
    {
        ula.validate();
        if (!(k_design > 0.0))
            throw ConfigError("design wavenumber must be positive");

        // a_m(steer) conj(a_m(incidence)) = exp(-j k m_bar delta (cos steer - cos incidence))
        const double step = k_design * ula.spacing * (std::cos(steer) - std::cos(incidence));
        std::vector<double> phases(static_cast<std::size_t>(ula.elements));
        for (int m = 0; m < ula.elements; ++m)
            phases[static_cast<std::size_t>(m)] = std::remainder(-step * ula.centered_index(m), 2.0 * kPi);
        return PhaseProfile(std::move(phases), steer, k_design, incidence);
    }

    CVector effective_response(const PhaseProfile &profile, const UlaSpec &ula, double k, double theta_in)
    {
        if (profile.size() != static_cast<std::size_t>(ula.elements))
            throw ConfigError("phase profile has " + std::to_string(profile.size()) + " entries, array has " +
                              std::to_string(ula.elements));
        return profile.phasors().cwiseProduct(steering_vector(ula, k, theta_in));
    }

    cdouble pattern_gain(const CVector &phasors, const UlaSpec &ula, double k, double theta_in, double theta_out)
    {
        if (phasors.size() != ula.elements)
            throw ConfigError("phase profile length does not match the array");

        // conj(a_m(out)) a_m(in) = exp(j k m_bar delta (cos out - cos in)); walk m with a phasor recurrence
        const double step = k * ula.spacing * (std::cos(theta_out) - std::cos(theta_in));
        const cdouble w = std::polar(1.0, step);
        cdouble z = std::polar(1.0, step * ula.centered_index(0));
        cdouble acc = 0.0;
        for (int m = 0; m < ula.elements; ++m)
        {
            acc += phasors[m] * z;
            z *= w;
        }
        return acc;
    }

    cdouble pattern_gain(const PhaseProfile &profile, const UlaSpec &ula, double k, double theta_in, double theta_out)
    {
        return pattern_gain(profile.phasors(), ula, k, theta_in, theta_out);
    }
}
