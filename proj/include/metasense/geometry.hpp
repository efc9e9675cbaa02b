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

#ifndef METASENSE_GEOMETRY_HPP
#define METASENSE_GEOMETRY_HPP

#include <cmath>
#include <numbers>

namespace metasense
{
    inline constexpr double kSpeedOfLight = 299792458.0; // [m/s], exact
    inline constexpr double kPi = std::numbers::pi;

    constexpr double deg2rad(double deg) { return deg * (kPi / 180.0); }
    constexpr double rad2deg(double rad) { return rad * (180.0 / kPi); }

    struct Point2
    {
        double x = 0.0; // [m]
        double y = 0.0; // [m]

        friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
        friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
        friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
        friend constexpr bool operator==(Point2, Point2) = default;
    };

    inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
    inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
    inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
    inline double distance(Point2 a, Point2 b) { return norm(a - b); }

    // Planar scene: one radar and two surface centers on a common axis.
    //
    // Angles are measured from the positive axis direction (surface 1 -> surface 2) at the pair
    // midpoint and lie in (0, pi). Targets are placed on the half-plane that contains the radar.
    //
    // The incidence angle is the direction of propagation of the radar wave as it arrives at the
    // surfaces, i.e. pi minus the angle of the midpoint->radar ray. With this reference the
    // far-field relations t2 = t1 + d cos(theta_in) and s2 = s1 - d cos(theta) both hold, and the
    // inner product a(theta)^H Psi a(theta_in) is the physical bistatic element sum.
    class SceneGeometry
    {
    public:
        // Throws GeometryError for coincident surfaces, a radar on a surface, or a radar on the axis.
        SceneGeometry(Point2 radar, Point2 surface1, Point2 surface2);

        Point2 radar() const { return radar_; }
        Point2 surface1() const { return surface1_; }
        Point2 surface2() const { return surface2_; }
        Point2 midpoint() const { return midpoint_; }
        Point2 axis() const { return axis_; }     // unit vector surface 1 -> surface 2
        Point2 normal() const { return normal_; } // unit normal pointing to the radar side

        double separation() const { return separation_; }          // d [m]
        double radar_to_surface1() const { return t1_; }           // [m]
        double radar_to_surface2() const { return t2_; }           // [m]
        double radar_to_midpoint() const { return t_mid_; }        // [m]
        double incidence_angle() const { return theta_in_; }       // [rad]
        double radar_direction() const { return kPi - theta_in_; } // angle of midpoint->radar [rad]

    private:
        Point2 radar_, surface1_, surface2_, midpoint_, axis_, normal_;
        double separation_ = 0.0, t1_ = 0.0, t2_ = 0.0, t_mid_ = 0.0, theta_in_ = 0.0;
    };

    struct Target
    {
        Point2 position;
        double rcs = 1.0; // sigma, dimensionless
    };

    struct PolarPlacement
    {
        double theta = 0.0;    // [rad] from the axis at the midpoint
        double distance = 0.0; // [m] from the midpoint
    };

    Point2 polar_to_point(const SceneGeometry &scene, PolarPlacement placement);
    PolarPlacement point_to_polar(const SceneGeometry &scene, Point2 point);

    struct PathLengths
    {
        double t1 = 0.0, t2 = 0.0; // radar -> surface centers [m]
        double s1 = 0.0, s2 = 0.0; // surface centers -> target [m]
        double p = 0.0;            // radar -> target [m]
    };

    // Euclidean distances; throws GeometryError when the target coincides with the radar or a surface.
    PathLengths exact_path_lengths(const SceneGeometry &scene, Point2 target);

    struct FarFieldAngles
    {
        double theta = 0.0;      // [rad]
        double theta_in = 0.0;   // [rad]
        bool near_field = false; // target inside the exclusion radius
        bool on_axis = false;    // target collinear with the surfaces (theta is 0 or pi)
        bool shadow_side = false; // target on the opposite half-plane from the radar
    };

    // The exclusion radius is exclusion_factor * d around the midpoint. Near-field placements are
    // flagged, never rejected.
    FarFieldAngles far_field_angles(const SceneGeometry &scene, Point2 target, double exclusion_factor = 10.0);

    struct FarFieldPaths
    {
        double t2 = 0.0;
        double s2 = 0.0;
    };

    FarFieldPaths far_field_path_model(const SceneGeometry &scene, double theta, double theta_in, double s1);

    // Which intersection of the range circle with the candidate ray to keep when both are in front
    // of the midpoint.
    enum class RangeRoot
    {
        Near,
        Far
    };

    // Distance from the midpoint to a target seen at angle theta whose radar range is p, from the
    // law of cosines on the (radar, midpoint, target) triangle:
    //     p^2 = t^2 + s^2 - 2 t s cos(alpha),  alpha = |radar_direction - theta|.
    // Throws InfeasibleRangeError when no positive root exists.
    double s1_from_range(const SceneGeometry &scene, double p, double theta, RangeRoot root = RangeRoot::Near);

    // True when s1_from_range would succeed.
    bool range_is_feasible(const SceneGeometry &scene, double p, double theta);
}

#endif
