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

#ifndef METASENSE_ERRORS_HPP
#define METASENSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace metasense
{
    // Base of everything the library throws on purpose.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Coincident points, collinear radar, zero separation.
    class GeometryError : public Error
    {
    public:
        using Error::Error;
    };

    // A candidate angle cannot be reconciled with the measured radar-target range.
    class InfeasibleRangeError : public Error
    {
    public:
        using Error::Error;
    };

    // Invalid or inconsistent configuration (including length mismatches).
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    class EstimationError : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };
}

#endif
