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

#include "metasense/geometry.hpp"
#include "metasense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace metasense
{
    namespace
    {
        constexpr double kCoincidenceTol = 1e-12; // [m]

        bool all_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

        // Unsigned angle of `dir` from the axis, in [0, pi].
        double angle_from_axis(Point2 axis, Point2 dir)
        {
            return std::atan2(std::abs(cross(axis, dir)), dot(axis, dir));
        }
    }

    SceneGeometry::SceneGeometry(Point2 radar, Point2 surface1, Point2 surface2)
        : radar_(radar), surface1_(surface1), surface2_(surface2)
    {
        if (!all_finite(radar) || !all_finite(surface1) || !all_finite(surface2))
            throw GeometryError("scene coordinates must be finite");

        separation_ = distance(surface1, surface2);
        if (separation_ <= kCoincidenceTol)
            throw GeometryError("surface centers coincide (d must be > 0)");

        axis_ = (1.0 / separation_) * (surface2 - surface1);
        midpoint_ = 0.5 * (surface1 + surface2);

        t1_ = distance(radar, surface1);
        t2_ = distance(radar, surface2);
        if (t1_ <= kCoincidenceTol || t2_ <= kCoincidenceTol)
            throw GeometryError("radar coincides with a surface center");

        const Point2 to_radar = radar - midpoint_;
        t_mid_ = norm(to_radar);
        const double side = cross(axis_, to_radar);
        if (std::abs(side) <= kCoincidenceTol * std::max(1.0, t_mid_))
            throw GeometryError("radar lies on the surface axis; incidence angle must be in (0, pi)");

        normal_ = side > 0.0 ? Point2{-axis_.y, axis_.x} : Point2{axis_.y, -axis_.x};
        theta_in_ = kPi - angle_from_axis(axis_, to_radar);
    }

    Point2 polar_to_point(const SceneGeometry &scene, PolarPlacement placement)
    {
        const double c = std::cos(placement.theta);
        const double s = std::sin(placement.theta);
        return scene.midpoint() + placement.distance * (c * scene.axis() + s * scene.normal());
    }

    PolarPlacement point_to_polar(const SceneGeometry &scene, Point2 point)
    {
        const Point2 rel = point - scene.midpoint();
        return {angle_from_axis(scene.axis(), rel), norm(rel)};
    }

    PathLengths exact_path_lengths(const SceneGeometry &scene, Point2 target)
    {
        if (!all_finite(target))
            throw GeometryError("target coordinates must be finite");

        PathLengths out;
        out.t1 = scene.radar_to_surface1();
        out.t2 = scene.radar_to_surface2();
        out.s1 = distance(scene.surface1(), target);
        out.s2 = distance(scene.surface2(), target);
        out.p = distance(scene.radar(), target);

        if (out.p <= kCoincidenceTol)
            throw GeometryError("target coincides with the radar");
        if (out.s1 <= kCoincidenceTol || out.s2 <= kCoincidenceTol)
            throw GeometryError("target coincides with a surface center");
        return out;
    }

    FarFieldAngles far_field_angles(const SceneGeometry &scene, Point2 target, double exclusion_factor)
    {
        const Point2 rel = target - scene.midpoint();
        const double r = norm(rel);
        if (r <= kCoincidenceTol)
            throw GeometryError("target coincides with the pair midpoint");

        FarFieldAngles out;
        out.theta = angle_from_axis(scene.axis(), rel);
        out.theta_in = scene.incidence_angle();
        out.near_field = r < exclusion_factor * scene.separation();

        const double side = dot(scene.normal(), rel);
        out.on_axis = std::abs(side) <= 1e-12 * r;
        out.shadow_side = !out.on_axis && side < 0.0;
        return out;
    }

    FarFieldPaths far_field_path_model(const SceneGeometry &scene, double theta, double theta_in, double s1)
    {
        const double d = scene.separation();
        return {scene.radar_to_surface1() + d * std::cos(theta_in), s1 - d * std::cos(theta)};
    }

    namespace
    {
        // Returns a negative value when infeasible.
        double solve_surface_distance(const SceneGeometry &scene, double p, double theta, RangeRoot root)
        {
            if (!(p > 0.0) || !std::isfinite(p) || !std::isfinite(theta))
                return -1.0;
            const double t = scene.radar_to_midpoint();
            const double alpha = std::abs(scene.radar_direction() - theta);
            const double b = t * std::cos(alpha);
            const double h = t * std::sin(alpha); // distance from the radar to the candidate ray's line
            const double disc = (p - h) * (p + h);
            if (disc < 0.0)
                return -1.0;
            const double sq = std::sqrt(disc);
            const double far = b + sq;
            const double near = b - sq;
            if (root == RangeRoot::Near && near > kCoincidenceTol)
                return near;
            return far > kCoincidenceTol ? far : -1.0;
        }
    }

    double s1_from_range(const SceneGeometry &scene, double p, double theta, RangeRoot root)
    {
        const double s = solve_surface_distance(scene, p, theta, root);
        if (s < 0.0)
            throw InfeasibleRangeError("range " + std::to_string(p) + " m is not reachable along " +
                                       std::to_string(rad2deg(theta)) + " deg");
        return s;
    }

    bool range_is_feasible(const SceneGeometry &scene, double p, double theta)
    {
        return solve_surface_distance(scene, p, theta, RangeRoot::Far) > 0.0;
    }
}
