// SPDX-License-Identifier: Apache-2.0
//
// pasrad - two-channel passive radar detection simulator
// Copyright (C) 2026 The pasrad authors
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

#include "catch_amalgamated.hpp"

#include <cmath>

#include "pasrad/random.hpp"
#include "pasrad/scenario.hpp"

using namespace pasrad;
using Catch::Approx;

TEST_CASE("Bistatic delay - direct path")
{
    const Vec2 tx{30e3, 10e3}, rx{1e3, 30e3};
    const double d = bistatic_delay(tx, rx);

    // sqrt(29^2 + 20^2) km = 35 227.8 m
    CHECK(d == Approx(std::sqrt(29e3 * 29e3 + 20e3 * 20e3) / 299792458.0).epsilon(1e-14));
    CHECK(std::abs(d - 1.1751e-4) < 5e-9);
    CHECK(bistatic_delay(rx, tx) == d);
    CHECK(bistatic_delay(tx, tx) == 0.0);
}

TEST_CASE("Bistatic delay - via target")
{
    const Vec2 tx{30e3, 10e3}, rx{1e3, 30e3}, target{35e3, 45e3};
    const double p = bistatic_delay(tx, rx, target);

    // sqrt(1250) km + sqrt(1381) km
    CHECK(p == Approx((std::sqrt(1250e6) + std::sqrt(1381e6)) / 299792458.0).epsilon(1e-14));
    CHECK(std::abs(p - 2.4189e-4) < 5e-9);
}

TEST_CASE("Target Doppler")
{
    const Vec2 tx{30e3, 10e3}, rx{1e3, 30e3}, target{35e3, 45e3}, v{100.0, 100.0};
    const double wavelength = 299792458.0 / 600e6;

    CHECK(target_doppler(tx, rx, target, {0.0, 0.0}, wavelength) == 0.0);

    // Rate of change of the bistatic path length by central differences.
    const auto path = [&](double t) {
        const Vec2 p{target.x + v.x * t, target.y + v.y * t};
        return std::hypot(p.x - tx.x, p.y - tx.y) + std::hypot(p.x - rx.x, p.y - rx.y);
    };
    const double h = 1e-3;
    const double rate = (path(h) - path(-h)) / (2.0 * h);
    CHECK(target_doppler(tx, rx, target, v, wavelength) == Approx(rate / wavelength).epsilon(1e-6));

    // Orthogonal to the sum of the two unit vectors.
    const double ux = (target.x - tx.x) / distance(target, tx) + (target.x - rx.x) / distance(target, rx);
    const double uy = (target.y - tx.y) / distance(target, tx) + (target.y - rx.y) / distance(target, rx);
    CHECK(std::abs(target_doppler(tx, rx, target, {-uy, ux}, wavelength)) < 1e-12);

    // Linear in velocity.
    const double f1 = target_doppler(tx, rx, target, {3.0, -7.0}, wavelength);
    const double f2 = target_doppler(tx, rx, target, {-2.0, 11.0}, wavelength);
    CHECK(target_doppler(tx, rx, target, {1.0 * 3.0 + 2.5 * -2.0, 1.0 * -7.0 + 2.5 * 11.0}, wavelength) ==
          Approx(f1 + 2.5 * f2).epsilon(1e-12));

    CHECK_THROWS_AS(target_doppler(tx, rx, tx, v, wavelength), DegenerateInput);
}

TEST_CASE("Geometry of the default scenario")
{
    Scenario s = default_scenario();
    CHECK(validate(s).empty());
    const PathGeometry g = compute_geometry(s);
    REQUIRE(g.direct_delays.rows() == 2);
    REQUIRE(g.direct_delays.cols() == 3);
    CHECK(g.direct_delays(0, 0) == bistatic_delay({30e3, 10e3}, {1e3, 30e3}));
    CHECK(g.target_delays(1, 2) == bistatic_delay({40e3, 50e3}, {12e3, 80e3}, Vec2{35e3, 45e3}));
    CHECK_FALSE(g.scatterer_delays.has_value());
    CHECK((g.direct_delays.array() >= 0.0).all());

    s.target_velocity = {0.0, 0.0};
    CHECK((compute_geometry(s).target_dopplers.array() == 0.0).all());

    s.scatterer_position = Vec2{10e3, 15e3};
    s.mnr_avg_db = -10.0;
    const PathGeometry gm = compute_geometry(s);
    REQUIRE(gm.scatterer_delays.has_value());
    CHECK((*gm.scatterer_delays)(0, 1) == bistatic_delay({30e3, 10e3}, {5e3, 50e3}, Vec2{10e3, 15e3}));
}

TEST_CASE("Default scenario constants")
{
    const Scenario s = default_scenario();
    CHECK(s.n_tx() == 2);
    CHECK(s.n_rx() == 3);
    CHECK(s.n_samples == 1024);
    CHECK(s.noise_variances(0, 0) == 8.28e-13);
    CHECK(s.noise_variances(0, 1) == Approx(0.75 * 8.28e-13).epsilon(1e-15));
    CHECK(s.noise_variances(1, 2) == Approx(1.15 * 1.3 * 8.28e-13).epsilon(1e-15));
}

TEST_CASE("Scenario validation")
{
    Scenario s = default_scenario();
    SECTION("multipath needs both fields")
    {
        s.scatterer_position = Vec2{10e3, 15e3};
        CHECK_THROWS_AS(validate(s), ConfigError);
        s.mnr_avg_db = 0.0;
        CHECK_NOTHROW(validate(s));
    }
    SECTION("too few samples")
    {
        s.n_samples = 5;
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SECTION("non-positive noise")
    {
        s.noise_variances(1, 1) = 0.0;
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SECTION("carrier count")
    {
        s.carriers.pop_back();
        CHECK_THROWS_AS(validate(s), ConfigError);
    }
    SECTION("single receiver warns")
    {
        s.rx_positions.resize(1);
        s.noise_variances.conservativeResize(2, 1);
        CHECK(validate(s).size() == 1);
    }
}

TEST_CASE("Amplitude draws realize the requested ratios")
{
    Scenario s = default_scenario();
    Rng rng = make_stream(3, 0, 0);

    SECTION("no target")
    {
        const ChannelAmplitudes a = draw_amplitudes(s, rng);
        CHECK(a.alpha.cwiseAbs().maxCoeff() == 0.0);
        CHECK_FALSE(a.zeta.has_value());
    }
    SECTION("unit ratio with unit noise")
    {
        s.dnr_avg_db = 0.0;
        s.noise_variances.setOnes();
        const ChannelAmplitudes a = draw_amplitudes(s, rng);
        CHECK((a.beta.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);
    }
    SECTION("reference noise levels")
    {
        s.snr_avg_db = -23.0;
        s.scatterer_position = Vec2{10e3, 15e3};
        s.mnr_avg_db = -4.0;
        const ChannelAmplitudes a = draw_amplitudes(s, rng);
        CHECK(std::abs(average_ratio(a.beta, s.noise_variances) / 0.1 - 1.0) < 1e-12);
        CHECK(std::abs(average_ratio(a.alpha, s.noise_variances) / db_to_linear(-23.0) - 1.0) < 1e-12);
        CHECK(std::abs(average_ratio(*a.zeta, s.noise_variances) / db_to_linear(-4.0) - 1.0) < 1e-12);
    }
}

TEST_CASE("Restricting transmitters")
{
    const Scenario s = restrict_transmitters(default_scenario(), 1);
    CHECK(s.n_tx() == 1);
    CHECK(s.noise_variances.rows() == 1);
    CHECK(s.carriers.size() == 1);
    CHECK_NOTHROW(validate(s));
    CHECK_THROWS_AS(restrict_transmitters(s, 2), ConfigError);
}

TEST_CASE("Random streams are keyed")
{
    Rng a = make_stream(1, 2, 3), b = make_stream(1, 2, 3), c = make_stream(1, 3, 2);
    const auto first = a();
    CHECK(first == b());
    CHECK(first != c());
    for (int i = 0; i < 1000; ++i)
    {
        const double u = uniform01(a);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}
