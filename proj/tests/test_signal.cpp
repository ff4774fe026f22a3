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
#include <filesystem>

#include "oracles.hpp"
#include "pasrad/random.hpp"
#include "pasrad/signal.hpp"

using namespace pasrad;

namespace
{

double max_abs_diff(const CVector &a, const CVector &b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("Waveform samples have unit modulus")
{
    Rng rng = make_stream(11, 0, 0);
    const Waveform w4 = generate_waveform(4, rng);
    REQUIRE(w4.samples.size() == 4);
    for (const auto &s : w4.samples)
        CHECK(std::abs(std::abs(s) - 1.0) < 1e-15);

    const Waveform w = generate_waveform(1 << 20, rng);
    CHECK(std::abs(w.samples.squaredNorm() - double(1 << 20)) < 1e-12 * double(1 << 20));
    CHECK(std::abs(w.samples.mean()) < 5e-3);

    CHECK_THROWS_AS(generate_waveform(0, rng), DegenerateInput);
}

TEST_CASE("Delay-Doppler operator - identity")
{
    std::mt19937_64 g(1);
    const CVector v = oracle::random_vector(g, 100);
    const CVector out = delay_doppler_apply(v, 0.0, 0.0, 10e6);
    CHECK((out.array() == v.array()).all());
}

TEST_CASE("Delay-Doppler operator - unitarity")
{
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> delay(0.0, 5e-4), doppler(-500.0, 500.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const CVector v = oracle::random_vector(g, 1024);
        const CVector out = delay_doppler_apply(v, delay(g), doppler(g), 10e6);
        worst = std::max(worst, std::abs(out.norm() - v.norm()) / v.norm());
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("Delay-Doppler operator - integer delay is a circular rotation")
{
    std::mt19937_64 g(3);
    const double fs = 10e6;
    for (const int len : {8, 64, 1024})
        for (const int k : {1, 3, 7, 200, 1023})
        {
            if (k >= len)
                continue;
            const CVector v = oracle::random_vector(g, len);
            const CVector out = delay_doppler_apply(v, double(k) / fs, 0.0, fs);
            // B(-tau df) applied to F v advances the sequence by k samples.
            CVector expected(len);
            for (int n = 0; n < len; ++n)
                expected[n] = v[(n + k) % len];
            INFO("L=" << len << " k=" << k);
            CHECK(max_abs_diff(out, expected) < 1e-10);
        }
}

TEST_CASE("Delay-Doppler operator - matches the dense matrix")
{
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> delay(0.0, 2e-6), doppler(-3e5, 3e5);
    for (const int len : {4, 6, 8, 15})
        for (int rep = 0; rep < 5; ++rep)
        {
            const double tau = delay(g), f = doppler(g);
            const CMatrix dense = oracle::dense_operator(len, tau, f, 10e6);
            const CVector v = oracle::random_vector(g, len);
            const DelayDopplerOperator op(std::size_t(len), tau, f, 10e6);
            CHECK(max_abs_diff(op.apply(v), dense * v) < 1e-12);
            CHECK(max_abs_diff(op.apply_adjoint(v), dense.adjoint() * v) < 1e-12);
        }
}

TEST_CASE("Delay-Doppler operator - adjoint inverts and composes")
{
    std::mt19937_64 g(5);
    const CVector v = oracle::random_vector(g, 512);
    const DelayDopplerOperator a(512, 3.3e-5, 120.0, 10e6), b(512, 1.7e-5, 0.0, 10e6);
    CHECK(max_abs_diff(a.apply_adjoint(a.apply(v)), v) < 1e-10);
    CHECK(max_abs_diff(a.apply(a.apply_adjoint(v)), v) < 1e-10);

    // Two pure delays compose to their sum.
    const DelayDopplerOperator c(512, 3.3e-5, 0.0, 10e6), sum(512, 3.3e-5 + 1.7e-5, 0.0, 10e6);
    CHECK(max_abs_diff(c.apply(b.apply(v)), sum.apply(v)) < 1e-10);

    // In-place use.
    CVector w = v;
    a.apply(w.data(), w.data());
    CHECK(max_abs_diff(w, a.apply(v)) == 0.0);

    CHECK_THROWS_AS(DelayDopplerOperator(8, 0.0, 0.0, 0.0), DegenerateInput);
    CHECK_THROWS_AS(a.apply(CVector(7)), DegenerateInput);
}

TEST_CASE("Synthesis - noise-free limit")
{
    Scenario s = default_scenario();
    s.noise_variances.setConstant(1e-30);
    s.dnr_avg_db = 300.0; // |beta|^2 = 1e30 * 1e-30 = 1
    const PathGeometry geometry = compute_geometry(s);
    Rng rng = make_stream(1, 0, 0);
    const ChannelAmplitudes amp = draw_amplitudes(s, rng);
    const Observation obs = synthesize(s, amp, geometry, Hypothesis::H0, rng);
    for (std::size_t j = 0; j < s.n_tx(); ++j)
        for (Eigen::Index k = 0; k < 3; ++k)
        {
            CHECK(obs.x[j].col(k).squaredNorm() < 1e-20);
            const double expected = std::norm(amp.beta(Eigen::Index(j), k)) * double(s.n_samples);
            CHECK(std::abs(obs.y[j].col(k).squaredNorm() / expected - 1.0) < 1e-9);
        }
}

TEST_CASE("Synthesis - symmetric paths give identical signal parts")
{
    Scenario s = default_scenario();
    s.tx_positions.resize(1);
    s.carriers.resize(1);
    s.noise_variances.conservativeResize(1, 3);
    s.noise_variances.setConstant(1e-40);
    s.dnr_avg_db = 400.0;

    // Same delay on both paths, no Doppler.
    PathGeometry geometry = compute_geometry(s);
    geometry.target_delays = geometry.direct_delays;
    geometry.target_dopplers.setZero();
    Rng rng = make_stream(2, 0, 0);
    ChannelAmplitudes amp = draw_amplitudes(s, rng);
    amp.alpha = amp.beta;

    Rng a = make_stream(9, 0, 0);
    const Observation obs = synthesize(s, amp, geometry, Hypothesis::H1, a);
    CHECK((obs.x[0] - obs.y[0]).cwiseAbs().maxCoeff() < 1e-18);
    CHECK(std::abs(obs.y[0].col(1).squaredNorm() / double(s.n_samples) - 1.0) < 1e-9);
    CHECK(obs.truth == Hypothesis::H1);
}

TEST_CASE("Synthesis - noise power")
{
    Scenario s = default_scenario();
    s.n_samples = 64;
    s.noise_variances.setConstant(2.5);
    s.dnr_avg_db = -400.0;
    const PathGeometry geometry = compute_geometry(s);
    const PathOperators paths(geometry, s.n_samples, s.sample_rate);
    double total = 0.0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t)
    {
        Rng rng = make_stream(5, std::uint64_t(t), 0);
        std::vector<Waveform> waves{generate_waveform(64, rng), generate_waveform(64, rng)};
        const ChannelAmplitudes amp = draw_amplitudes(s, rng);
        const Observation obs = synthesize(s, amp, paths, waves, Hypothesis::H0, rng);
        total += obs.x[1].col(2).squaredNorm();
    }
    CHECK(std::abs(total / draws / (2.5 * 64) - 1.0) < 0.03);
}

TEST_CASE("Compensation recovers the scaled waveform")
{
    Scenario s = default_scenario();
    s.noise_variances.setConstant(1e-60);
    s.snr_avg_db = 600.0;
    s.dnr_avg_db = 600.0;
    const PathGeometry geometry = compute_geometry(s);
    const PathOperators paths(geometry, s.n_samples, s.sample_rate);
    Rng rng = make_stream(6, 0, 0);
    std::vector<Waveform> waves{generate_waveform(s.n_samples, rng), generate_waveform(s.n_samples, rng)};
    const ChannelAmplitudes amp = draw_amplitudes(s, rng);
    const Observation obs = synthesize(s, amp, paths, waves, Hypothesis::H1, rng);
    const AlignedData aligned = compensate(obs, geometry, s.sample_rate);
    for (std::size_t j = 0; j < 2; ++j)
        for (Eigen::Index k = 0; k < 3; ++k)
        {
            const auto jj = Eigen::Index(j);
            const CVector ex = amp.alpha(jj, k) * waves[j].samples;
            const CVector ey = amp.beta(jj, k) * waves[j].samples;
            CHECK(max_abs_diff(aligned.x_aligned[j].col(k), ex) < 1e-9 * std::abs(amp.alpha(jj, k)));
            CHECK(max_abs_diff(aligned.y_aligned[j].col(k), ey) < 1e-9 * std::abs(amp.beta(jj, k)));
            CHECK(std::abs(aligned.col_norms_sq_x(jj, k) / obs.x[j].col(k).squaredNorm() - 1.0) < 1e-12);
            CHECK(std::abs(aligned.col_norms_sq_y(jj, k) / obs.y[j].col(k).squaredNorm() - 1.0) < 1e-12);
        }
}

TEST_CASE("Multipath adds a scatterer echo to the reference channel only")
{
    Scenario s = default_scenario();
    s.n_samples = 128;
    s.scatterer_position = Vec2{10e3, 15e3};
    s.mnr_avg_db = 0.0;
    const PathGeometry geometry = compute_geometry(s);
    const PathOperators with(geometry, s.n_samples, s.sample_rate);
    PathGeometry plain = geometry;
    plain.scatterer_delays.reset();
    const PathOperators without(plain, s.n_samples, s.sample_rate);

    Rng rng = make_stream(7, 0, 0);
    std::vector<Waveform> waves{generate_waveform(128, rng), generate_waveform(128, rng)};
    const ChannelAmplitudes amp = draw_amplitudes(s, rng);
    Rng a = make_stream(8, 0, 0), b = make_stream(8, 0, 0);
    const Observation m = synthesize(s, amp, with, waves, Hypothesis::H0, a);
    const Observation p = synthesize(s, amp, without, waves, Hypothesis::H0, b);
    const CVector echo = (*amp.zeta)(1, 2) * with.scatterer_path(1, 2).apply(waves[1].samples);
    CHECK(max_abs_diff(m.y[1].col(2) - p.y[1].col(2), echo) < 1e-12 * echo.norm());
    CHECK((m.x[1] - p.x[1]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Observation dump round trip")
{
    Scenario s = default_scenario();
    s.n_samples = 16;
    Rng rng = make_stream(9, 0, 0);
    const Observation obs = synthesize(s, draw_amplitudes(s, rng), compute_geometry(s), Hypothesis::H0, rng);
    const auto path = std::filesystem::temp_directory_path() / "pasrad_dump_test.bin";
    write_observation(path.string(), obs);
    CHECK(std::filesystem::file_size(path) == 32 + 2 * 2 * 16 * 3 * 16);
    const Observation back = read_observation(path.string());
    std::filesystem::remove(path);
    REQUIRE(back.x.size() == 2);
    for (std::size_t j = 0; j < 2; ++j)
    {
        CHECK((back.x[j].array() == obs.x[j].array()).all());
        CHECK((back.y[j].array() == obs.y[j].array()).all());
    }
    CHECK_THROWS(read_observation((std::filesystem::temp_directory_path() / "pasrad_missing.bin").string()));
}

TEST_CASE("Aligned data rejects inconsistent shapes")
{
    CHECK_THROWS_AS(AlignedData::from_matrices({}, {}), DegenerateInput);
    CHECK_THROWS_AS(AlignedData::from_matrices({CMatrix::Ones(4, 2)}, {CMatrix::Ones(4, 3)}), DegenerateInput);
}
