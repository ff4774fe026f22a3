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

#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pasrad/common.hpp"

namespace pasrad
{

struct Vec2
{
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2 &a, const Vec2 &b);

// Multistatic geometry and channel parameterization. Positions in meters,
// velocities in m/s, frequencies in Hz, noise variances in watts.
struct Scenario
{
    std::vector<Vec2> tx_positions;
    std::vector<Vec2> rx_positions;
    Vec2 target_position;
    Vec2 target_velocity;
    std::optional<Vec2> scatterer_position;
    std::vector<double> carriers;
    double sample_rate = 10e6;
    std::size_t n_samples = 1024;
    RMatrix noise_variances; // Nt x Nr, per complex sample
    double dnr_avg_db = -10.0;
    double snr_avg_db = -std::numeric_limits<double>::infinity(); // -inf: no target
    std::optional<double> mnr_avg_db;

    std::size_t n_tx() const { return tx_positions.size(); }
    std::size_t n_rx() const { return rx_positions.size(); }
    bool has_multipath() const { return scatterer_position.has_value(); }
};

// Throws ConfigError on an invalid scenario. Returns non-fatal warnings.
std::vector<std::string> validate(const Scenario &scenario);

// Reference layout: three receivers, two transmitters at 600 and 650 MHz,
// 10 MHz sampling, L = 1024, DNR -10 dB, no target.
Scenario default_scenario();

// Keeps the first n_tx transmitters (and their noise rows).
Scenario restrict_transmitters(const Scenario &scenario, std::size_t n_tx);

struct ChannelAmplitudes
{
    CMatrix alpha; // target path, Nt x Nr
    CMatrix beta;  // direct path, Nt x Nr
    std::optional<CMatrix> zeta; // reference-channel multipath, Nt x Nr
};

struct PathGeometry
{
    RMatrix direct_delays;   // s, Nt x Nr
    RMatrix target_delays;   // s, Nt x Nr
    RMatrix target_dopplers; // Hz, Nt x Nr
    std::optional<RMatrix> scatterer_delays;
};

double db_to_linear(double db);

// Average of |a_jk|^2 / sigma2_jk over all channels.
double average_ratio(const CMatrix &amplitudes, const RMatrix &noise_variances);

double bistatic_delay(const Vec2 &tx, const Vec2 &rx, const std::optional<Vec2> &via_target = std::nullopt);

double target_doppler(const Vec2 &tx, const Vec2 &rx, const Vec2 &target, const Vec2 &velocity, double wavelength);

PathGeometry compute_geometry(const Scenario &scenario);

// Equal per-channel power ratios with uniform phases. Three phases are drawn per
// channel (target, direct, multipath when a scatterer exists) whatever the
// ratios are, so streams stay aligned across sweep points.
ChannelAmplitudes draw_amplitudes(const Scenario &scenario, Rng &rng);

} // namespace pasrad
