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

#include "pasrad/scenario.hpp"

#include <cmath>

#include "pasrad/random.hpp"

namespace pasrad
{

double distance(const Vec2 &a, const Vec2 &b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

static bool finite(const Vec2 &p)
{
    return std::isfinite(p.x) && std::isfinite(p.y);
}

std::vector<std::string> validate(const Scenario &s)
{
    std::vector<std::string> warnings;
    const std::size_t nt = s.n_tx(), nr = s.n_rx();
    if (nt == 0)
        throw ConfigError("at least one transmitter is required");
    if (s.carriers.size() != nt)
        throw ConfigError("carriers_hz must have one entry per transmitter");
    if (nr == 0)
        throw ConfigError("at least one receiver is required");
    if (nr < 2)
        warnings.emplace_back("fewer than two receivers: single-channel baselines are degenerate");
    for (const auto &p : s.tx_positions)
        if (!finite(p))
            throw ConfigError("non-finite transmitter position");
    for (const auto &p : s.rx_positions)
        if (!finite(p))
            throw ConfigError("non-finite receiver position");
    if (!finite(s.target_position) || !finite(s.target_velocity))
        throw ConfigError("non-finite target state");
    for (double c : s.carriers)
        if (!(c > 0.0) || !std::isfinite(c))
            throw ConfigError("carrier frequencies must be positive");
    if (!(s.sample_rate > 0.0) || !std::isfinite(s.sample_rate))
        throw ConfigError("sample_rate_hz must be positive");
    if (s.n_samples < 2 * nr)
        throw ConfigError("n_samples must be at least twice the number of receivers");
    if (static_cast<std::size_t>(s.noise_variances.rows()) != nt ||
        static_cast<std::size_t>(s.noise_variances.cols()) != nr)
        throw ConfigError("noise_variances_w must be Nt x Nr");
    for (Eigen::Index i = 0; i < s.noise_variances.size(); ++i)
    {
        const double v = s.noise_variances.data()[i];
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError("noise variances must be positive and finite");
    }
    if (std::isnan(s.dnr_avg_db) || std::isinf(s.dnr_avg_db))
        throw ConfigError("dnr_avg_db must be finite");
    if (std::isnan(s.snr_avg_db) || s.snr_avg_db == std::numeric_limits<double>::infinity())
        throw ConfigError("snr_avg_db must be finite or -inf");
    if (s.scatterer_position.has_value() != s.mnr_avg_db.has_value())
        throw ConfigError("scatterer_position_km and mnr_avg_db must be given together");
    if (s.scatterer_position && !finite(*s.scatterer_position))
        throw ConfigError("non-finite scatterer position");
    if (s.mnr_avg_db && !std::isfinite(*s.mnr_avg_db))
        throw ConfigError("mnr_avg_db must be finite");
    for (const auto &t : s.tx_positions)
        if (distance(t, s.target_position) == 0.0)
            throw ConfigError("target coincides with a transmitter");
    for (const auto &r : s.rx_positions)
        if (distance(r, s.target_position) == 0.0)
            throw ConfigError("target coincides with a receiver");
    return warnings;
}

Scenario default_scenario()
{
    Scenario s;
    s.rx_positions = {{1e3, 30e3}, {5e3, 50e3}, {12e3, 80e3}};
    s.tx_positions = {{30e3, 10e3}, {40e3, 50e3}};
    s.target_position = {35e3, 45e3};
    s.target_velocity = {100.0, 100.0};
    s.carriers = {600e6, 650e6};
    s.sample_rate = 10e6;
    s.n_samples = 1024;
    const double base = 8.28e-13;
    s.noise_variances.resize(2, 3);
    s.noise_variances << base * 1.0, base * 0.75, base * 1.3, //
        1.15 * base * 1.0, 1.15 * base * 0.75, 1.15 * base * 1.3;
    s.dnr_avg_db = -10.0;
    return s;
}

Scenario restrict_transmitters(const Scenario &scenario, std::size_t n_tx)
{
    if (n_tx == 0 || n_tx > scenario.n_tx())
        throw ConfigError("invalid transmitter count");
    Scenario s = scenario;
    s.tx_positions.resize(n_tx);
    s.carriers.resize(n_tx);
    s.noise_variances = scenario.noise_variances.topRows(static_cast<Eigen::Index>(n_tx));
    return s;
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double average_ratio(const CMatrix &amplitudes, const RMatrix &noise_variances)
{
    return (amplitudes.cwiseAbs2().array() / noise_variances.array()).mean();
}

double bistatic_delay(const Vec2 &tx, const Vec2 &rx, const std::optional<Vec2> &via_target)
{
    if (!via_target)
        return distance(rx, tx) / speed_of_light;
    return (distance(*via_target, tx) + distance(*via_target, rx)) / speed_of_light;
}

double target_doppler(const Vec2 &tx, const Vec2 &rx, const Vec2 &target, const Vec2 &velocity, double wavelength)
{
    const double dt = distance(target, tx);
    const double dr = distance(target, rx);
    if (dt == 0.0 || dr == 0.0)
        throw DegenerateInput("target coincides with a transmitter or receiver");
    if (!(wavelength > 0.0))
        throw DegenerateInput("wavelength must be positive");
    const double ux = (target.x - tx.x) / dt + (target.x - rx.x) / dr;
    const double uy = (target.y - tx.y) / dt + (target.y - rx.y) / dr;
    return (velocity.x * ux + velocity.y * uy) / wavelength;
}

PathGeometry compute_geometry(const Scenario &s)
{
    const auto nt = static_cast<Eigen::Index>(s.n_tx());
    const auto nr = static_cast<Eigen::Index>(s.n_rx());
    PathGeometry g;
    g.direct_delays.resize(nt, nr);
    g.target_delays.resize(nt, nr);
    g.target_dopplers.resize(nt, nr);
    if (s.scatterer_position)
        g.scatterer_delays = RMatrix(nt, nr);
    for (Eigen::Index j = 0; j < nt; ++j)
    {
        const Vec2 &t = s.tx_positions[static_cast<std::size_t>(j)];
        const double wavelength = speed_of_light / s.carriers[static_cast<std::size_t>(j)];
        for (Eigen::Index k = 0; k < nr; ++k)
        {
            const Vec2 &r = s.rx_positions[static_cast<std::size_t>(k)];
            g.direct_delays(j, k) = bistatic_delay(t, r);
            g.target_delays(j, k) = bistatic_delay(t, r, s.target_position);
            g.target_dopplers(j, k) = target_doppler(t, r, s.target_position, s.target_velocity, wavelength);
            if (s.scatterer_position)
                (*g.scatterer_delays)(j, k) = bistatic_delay(t, r, s.scatterer_position);
        }
    }
    return g;
}

ChannelAmplitudes draw_amplitudes(const Scenario &s, Rng &rng)
{
    const auto nt = static_cast<Eigen::Index>(s.n_tx());
    const auto nr = static_cast<Eigen::Index>(s.n_rx());
    const double snr = std::isinf(s.snr_avg_db) ? 0.0 : db_to_linear(s.snr_avg_db);
    const double dnr = db_to_linear(s.dnr_avg_db);
    const double mnr = s.mnr_avg_db ? db_to_linear(*s.mnr_avg_db) : 0.0;

    ChannelAmplitudes a;
    a.alpha.resize(nt, nr);
    a.beta.resize(nt, nr);
    if (s.scatterer_position)
        a.zeta = CMatrix(nt, nr);
    for (Eigen::Index j = 0; j < nt; ++j)
        for (Eigen::Index k = 0; k < nr; ++k)
        {
            const double var = s.noise_variances(j, k);
            a.alpha(j, k) = std::polar(std::sqrt(snr * var), uniform_phase(rng));
            a.beta(j, k) = std::polar(std::sqrt(dnr * var), uniform_phase(rng));
            if (a.zeta)
                (*a.zeta)(j, k) = std::polar(std::sqrt(mnr * var), uniform_phase(rng));
        }
    return a;
}

} // namespace pasrad
