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

#include "support.hpp"

#include "metasense/errors.hpp"

#include <doctest.h>

#include <random>

using namespace metasense;

namespace
{
    const SceneGeometry kReference({0.0, 4.0}, {-0.1, 0.0}, {0.1, 0.0});
}

TEST_SUITE("geometry")
{
    TEST_CASE("exact_path_lengths - radar to surface distance")
    {
        const PathLengths p = exact_path_lengths(kReference, {1.0, 2.0});
        CHECK(p.t1 == doctest::Approx(std::sqrt(0.01 + 16.0)).epsilon(1e-15));
        CHECK(p.t1 == doctest::Approx(4.00125).epsilon(1e-6));
        CHECK(p.t1 == p.t2);
        CHECK(p.p == doctest::Approx(std::sqrt(1.0 + 4.0)));
        CHECK(p.s1 == doctest::Approx(std::sqrt(1.1 * 1.1 + 4.0)));
        CHECK(p.s2 == doctest::Approx(std::sqrt(0.9 * 0.9 + 4.0)));
    }

    TEST_CASE("exact_path_lengths - degenerate targets are rejected")
    {
        CHECK_THROWS_AS(exact_path_lengths(kReference, {0.0, 4.0}), GeometryError);
        CHECK_THROWS_AS(exact_path_lengths(kReference, {-0.1, 0.0}), GeometryError);
        CHECK_THROWS_AS(exact_path_lengths(kReference, {0.1, 0.0}), GeometryError);
    }

    TEST_CASE("SceneGeometry - invalid layouts")
    {
        CHECK_THROWS_AS(SceneGeometry({0.0, 4.0}, {0.1, 0.0}, {0.1, 0.0}), GeometryError);
        CHECK_THROWS_AS(SceneGeometry({0.0, 0.0}, {-0.1, 0.0}, {0.1, 0.0}), GeometryError);
        CHECK_THROWS_AS(SceneGeometry({0.1, 0.0}, {-0.1, 0.0}, {0.1, 0.0}), GeometryError);
        CHECK_THROWS_AS(SceneGeometry({std::nan(""), 4.0}, {-0.1, 0.0}, {0.1, 0.0}), GeometryError);
        CHECK_THROWS_AS(SceneGeometry({5.0, 0.0}, {-0.1, 0.0}, {0.1, 0.0}), GeometryError);
    }

    TEST_CASE("SceneGeometry - derived quantities")
    {
        CHECK(kReference.separation() == doctest::Approx(0.2));
        CHECK(kReference.radar_to_midpoint() == doctest::Approx(4.0));
        CHECK(rad2deg(kReference.incidence_angle()) == doctest::Approx(90.0));
        CHECK(kReference.normal().y == doctest::Approx(1.0));

        // Radar seen from the midpoint at 60 deg: the incident wave travels towards 120 deg.
        const SceneGeometry oblique({2.0, 2.0 * std::sqrt(3.0)}, {-0.1, 0.0}, {0.1, 0.0});
        CHECK(rad2deg(oblique.radar_direction()) == doctest::Approx(60.0));
        CHECK(rad2deg(oblique.incidence_angle()) == doctest::Approx(120.0));
    }

    TEST_CASE("far_field_angles - reference geometry")
    {
        const Point2 target{2.41 * std::cos(deg2rad(40.0)), 2.41 * std::sin(deg2rad(40.0))};
        const FarFieldAngles a = far_field_angles(kReference, target);
        CHECK(rad2deg(a.theta) == doctest::Approx(40.0).epsilon(1e-12));
        CHECK(rad2deg(a.theta_in) == doctest::Approx(90.0));
        CHECK_FALSE(a.near_field);
        CHECK_FALSE(a.on_axis);
        CHECK(far_field_angles(kReference, polar_to_point(kReference, {deg2rad(58.0), 1.41})).near_field);

        const FarFieldAngles axis = far_field_angles(kReference, {-1.0, 0.0});
        CHECK(axis.on_axis);
        CHECK(rad2deg(axis.theta) == doctest::Approx(180.0));

        CHECK(far_field_angles(kReference, {0.5, -3.0}).shadow_side);
    }

    TEST_CASE("far_field_path_model - hand values")
    {
        const double t1 = kReference.radar_to_surface1();
        CHECK(far_field_path_model(kReference, deg2rad(40.0), kPi / 2, 2.41).t2 == doctest::Approx(t1));
        CHECK(far_field_path_model(kReference, kPi / 2, deg2rad(30.0), 2.41).s2 == doctest::Approx(2.41));
        CHECK(far_field_path_model(kReference, deg2rad(40.0), kPi / 2, 2.41).s2 ==
              doctest::Approx(2.41 - 0.2 * std::cos(40.0 * 3.14159265358979323846 / 180.0)).epsilon(1e-14));
        CHECK(far_field_path_model(kReference, deg2rad(40.0), kPi / 2, 2.41).s2 == doctest::Approx(2.2568).epsilon(1e-4));
    }

    TEST_CASE("s1_from_range - collinear targets on the radar ray")
    {
        const double t = kReference.radar_to_midpoint();
        const double dir = kReference.radar_direction();
        CHECK(s1_from_range(kReference, 1.5, dir, RangeRoot::Far) == doctest::Approx(t + 1.5));
        CHECK(s1_from_range(kReference, 1.5, dir, RangeRoot::Near) == doctest::Approx(t - 1.5));
        // Beyond the radar there is only one positive root.
        CHECK(s1_from_range(kReference, 5.0, dir) == doctest::Approx(t + 5.0));
    }

    TEST_CASE("s1_from_range - inverts the coordinate oracle")
    {
        const Point2 target = polar_to_point(kReference, {deg2rad(40.0), 2.41});
        const double p = std::hypot(target.x - 0.0, target.y - 4.0);
        CHECK(p == doctest::Approx(3.0684).epsilon(1e-4));
        CHECK(s1_from_range(kReference, p, deg2rad(40.0)) == doctest::Approx(2.41).epsilon(1e-12));
    }

    TEST_CASE("s1_from_range - infeasible range")
    {
        // Closest approach of the 10 deg ray to the radar is 4 sin(80 deg) = 3.94 m.
        CHECK_THROWS_AS(s1_from_range(kReference, 3.0, deg2rad(10.0)), InfeasibleRangeError);
        CHECK_FALSE(range_is_feasible(kReference, 3.0, deg2rad(10.0)));
        CHECK(range_is_feasible(kReference, 3.95, deg2rad(10.0)));
    }

    TEST_CASE("property - far-field path difference converges")
    {
        const double d = kReference.separation();
        for (double deg = 10.0; deg <= 170.0; deg += 5.0)
        {
            double previous = std::numeric_limits<double>::infinity();
            for (double r = 10.5 * d; r <= 200.0; r *= 2.0)
            {
                const Point2 x = polar_to_point(kReference, {deg2rad(deg), r});
                const PathLengths p = exact_path_lengths(kReference, x);
                const double err = std::abs((p.s2 - p.s1) - (-d * std::cos(deg2rad(deg))));
                CHECK(err < 1.5 * d * d / (2.0 * r));
                CHECK(err <= previous);
                previous = err;
            }
        }
    }

    TEST_CASE("property - polar round trip")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> angle(deg2rad(1.0), deg2rad(179.0));
        std::uniform_real_distribution<double> dist(2.0, 500.0);
        for (int i = 0; i < 2000; ++i)
        {
            const double theta = angle(rng), r = dist(rng);
            const Point2 x = polar_to_point(kReference, {theta, r});
            const FarFieldAngles a = far_field_angles(kReference, x);
            CHECK(std::abs(a.theta - theta) < 1e-9);
            CHECK_FALSE(a.near_field);
            CHECK(point_to_polar(kReference, x).distance == doctest::Approx(r).epsilon(1e-12));
        }
    }

    TEST_CASE("property - s1_from_range inverts exact geometry on random scenes")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::uniform_real_distribution<double> angle(deg2rad(5.0), deg2rad(175.0));
        int checked = 0;
        for (int i = 0; i < 500; ++i)
        {
            const double half = 0.05 + 0.2 * std::abs(u(rng));
            const SceneGeometry scene({10.0 * u(rng), 3.0 + 10.0 * std::abs(u(rng))}, {-half, 0.0}, {half, 0.0});
            const double theta = angle(rng);
            const double r = 20.0 * half + 40.0 * std::abs(u(rng));
            const Point2 x = polar_to_point(scene, {theta, r});
            if (distance(x, scene.radar()) < 1e-3)
                continue;
            const double p = distance(x, scene.radar());
            const double near = s1_from_range(scene, p, theta, RangeRoot::Near);
            const double far = s1_from_range(scene, p, theta, RangeRoot::Far);
            CHECK(std::min(std::abs(near - r), std::abs(far - r)) < 1e-6);
            if (p > scene.radar_to_midpoint())
                CHECK(std::abs(near - r) < 1e-6);
            ++checked;
        }
        CHECK(checked > 400);
    }
}
