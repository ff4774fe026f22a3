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

#include "pasrad/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pasrad/random.hpp"

namespace pasrad
{

namespace
{

constexpr std::size_t chunk_size = 16;

std::uint64_t tag_value(StreamTag tag)
{
    return static_cast<std::uint64_t>(tag);
}

constexpr std::array<DetectorKind, 5> invariant_detectors = {DetectorKind::LRT, DetectorKind::AW, DetectorKind::UG,
                                                             DetectorKind::AG, DetectorKind::RD};

} // namespace

std::vector<DetectorKind> ThresholdTable::detectors() const
{
    std::vector<DetectorKind> out;
    for (DetectorKind kind : all_detectors)
        if (thresholds.count(kind))
            out.push_back(kind);
    return out;
}

const DetectorEstimate &CurvePoint::at(DetectorKind kind) const
{
    for (const auto &e : estimates)
        if (e.detector == kind)
            return e;
    throw std::out_of_range("detector not present in curve point");
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z)
{
    if (n == 0)
        return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    return {std::clamp(centre - half, 0.0, p), std::clamp(centre + half, p, 1.0)};
}

double upper_quantile(std::vector<double> values, double pfa)
{
    if (values.empty())
        throw std::invalid_argument("empty sample");
    if (!(pfa > 0.0 && pfa < 1.0))
        throw std::invalid_argument("pfa must lie in (0, 1)");
    const double n = static_cast<double>(values.size());
    const double target = n * (1.0 - pfa);
    // Absorb representation error so that e.g. 2e5 * (1 - 1e-2) maps to 198000.
    auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9 * std::max(1.0, target)));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(values.begin(), nth, values.end());
    return *nth;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(chunks, 1)));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try
        {
            for (;;)
            {
                const std::size_t begin = next.fetch_add(chunk_size);
                if (begin >= n)
                    return;
                const std::size_t end = std::min(n, begin + chunk_size);
                for (std::size_t i = begin; i < end; ++i)
                    fn(i);
            }
        }
        catch (...)
        {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next.store(n);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

TrialRunner::TrialRunner(const Scenario &scenario)
    : scenario_(scenario), paths_(compute_geometry(scenario), scenario.n_samples, scenario.sample_rate)
{
    validate(scenario_);
}

AlignedData TrialRunner::aligned(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag,
                                 Hypothesis hypothesis) const
{
    Rng rng = make_stream(seed, trial, tag);
    std::vector<Waveform> waveforms;
    waveforms.reserve(scenario_.n_tx());
    for (std::size_t j = 0; j < scenario_.n_tx(); ++j)
        waveforms.push_back(generate_waveform(scenario_.n_samples, rng));
    const ChannelAmplitudes amplitudes = draw_amplitudes(scenario_, rng);
    const Observation obs = synthesize(scenario_, amplitudes, paths_, waveforms, hypothesis, rng);
    return compensate(obs, paths_);
}

StatisticSet TrialRunner::run(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag, Hypothesis hypothesis,
                              const std::vector<DetectorKind> &detectors) const
{
    return evaluate(aligned(seed, trial, tag, hypothesis), detectors);
}

std::vector<StatisticSet> simulate(const Scenario &scenario, Hypothesis hypothesis,
                                   const std::vector<DetectorKind> &detectors, std::uint64_t n_trials,
                                   std::uint64_t seed, std::uint64_t tag, const EngineOptions &options)
{
    const TrialRunner runner(scenario);
    std::vector<StatisticSet> out(static_cast<std::size_t>(n_trials));
    parallel_for(out.size(), options.threads,
                 [&](std::size_t i) { out[i] = runner.run(seed, i, tag, hypothesis, detectors); });
    return out;
}

ThresholdTable thresholds_from_pool(const std::vector<StatisticSet> &pool, const std::vector<DetectorKind> &detectors,
                                    double pfa, double dnr_eta_db, std::uint64_t seed)
{
    ThresholdTable table;
    table.pfa = pfa;
    table.dnr_eta_db = dnr_eta_db;
    table.n_trials = pool.size();
    table.seed = seed;
    std::vector<double> column(pool.size());
    for (DetectorKind kind : detectors)
    {
        for (std::size_t i = 0; i < pool.size(); ++i)
            column[i] = pool[i][kind];
        table.thresholds[kind] = upper_quantile(column, pfa);
    }
    return table;
}

ThresholdTable calibrate(const Scenario &scenario, const std::vector<DetectorKind> &detectors, double pfa,
                         std::uint64_t n_trials, std::uint64_t seed, const EngineOptions &options)
{
    if (!(pfa > 0.0 && pfa < 1.0))
        throw ConfigError("pfa must lie in (0, 1)");
    if (static_cast<double>(n_trials) * pfa < 50.0)
        throw GuardViolation("n_trials * pfa must be at least 50 for a usable quantile estimate");
    if (detectors.empty())
        throw ConfigError("no detectors selected");
    Scenario h0 = scenario;
    h0.snr_avg_db = -std::numeric_limits<double>::infinity();
    const auto pool =
        simulate(h0, Hypothesis::H0, detectors, n_trials, seed, tag_value(StreamTag::Calibration), options);
    return thresholds_from_pool(pool, detectors, pfa, scenario.dnr_avg_db, seed);
}

CurvePoint exceedance(const std::vector<StatisticSet> &pool, const ThresholdTable &thresholds, double sweep_value_db)
{
    CurvePoint point;
    point.sweep_value_db = sweep_value_db;
    point.n_trials = pool.size();
    for (DetectorKind kind : thresholds.detectors())
    {
        const double eta = thresholds.thresholds.at(kind);
        DetectorEstimate e;
        e.detector = kind;
        e.hits = static_cast<std::uint64_t>(
            std::count_if(pool.begin(), pool.end(), [&](const StatisticSet &s) { return s[kind] > eta; }));
        e.estimate = pool.empty() ? 0.0 : static_cast<double>(e.hits) / static_cast<double>(pool.size());
        const Interval ci = wilson_interval(e.hits, pool.size());
        e.ci_low = std::min(ci.low, e.estimate);
        e.ci_high = std::max(ci.high, e.estimate);
        point.estimates.push_back(e);
    }
    return point;
}

namespace
{

std::vector<CurvePoint> sweep(const std::vector<double> &values, std::uint64_t n_trials,
                              const std::function<std::vector<StatisticSet>(double)> &pool_at,
                              const ThresholdTable &thresholds)
{
    if (n_trials == 0)
        throw ConfigError("n_trials must be positive");
    if (thresholds.thresholds.empty())
        throw ConfigError("threshold table is empty");
    std::vector<CurvePoint> out;
    for (double v : values)
        out.push_back(exceedance(pool_at(v), thresholds, v));
    return out;
}

} // namespace

std::vector<CurvePoint> fap_curve(const Scenario &scenario, const ThresholdTable &thresholds,
                                  const std::vector<double> &dnr_sweep_db, std::uint64_t n_trials,
                                  std::uint64_t seed, const EngineOptions &options)
{
    const auto detectors = thresholds.detectors();
    return sweep(
        dnr_sweep_db, n_trials,
        [&](double dnr) {
            Scenario s = scenario;
            s.snr_avg_db = -std::numeric_limits<double>::infinity();
            s.dnr_avg_db = dnr;
            return simulate(s, Hypothesis::H0, detectors, n_trials, seed, tag_value(StreamTag::FalseAlarm), options);
        },
        thresholds);
}

std::vector<CurvePoint> mnr_curve(const Scenario &scenario, const ThresholdTable &thresholds,
                                  const std::vector<double> &mnr_sweep_db, std::uint64_t n_trials,
                                  std::uint64_t seed, const EngineOptions &options)
{
    if (!scenario.scatterer_position)
        throw ConfigError("multipath sweep requires a scatterer in the scenario");
    const auto detectors = thresholds.detectors();
    return sweep(
        mnr_sweep_db, n_trials,
        [&](double mnr) {
            Scenario s = scenario;
            s.snr_avg_db = -std::numeric_limits<double>::infinity();
            s.dnr_avg_db = thresholds.dnr_eta_db;
            s.mnr_avg_db = mnr;
            return simulate(s, Hypothesis::H0, detectors, n_trials, seed, tag_value(StreamTag::Multipath), options);
        },
        thresholds);
}

std::vector<CurvePoint> pd_curve(const Scenario &scenario, const ThresholdTable &thresholds,
                                 const std::vector<double> &snr_sweep_db, std::uint64_t n_trials, std::uint64_t seed,
                                 const EngineOptions &options)
{
    const auto detectors = thresholds.detectors();
    return sweep(
        snr_sweep_db, n_trials,
        [&](double snr) {
            Scenario s = scenario;
            s.snr_avg_db = snr;
            return simulate(s, Hypothesis::H1, detectors, n_trials, seed, tag_value(StreamTag::Detection), options);
        },
        thresholds);
}

double relative_deviation(double a, double b)
{
    if (a == b)
        return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

AlignedData scale_receivers(const AlignedData &aligned, const CMatrix &gains)
{
    if (static_cast<std::size_t>(gains.rows()) != aligned.n_tx() ||
        static_cast<std::size_t>(gains.cols()) != aligned.n_rx())
        throw DegenerateInput("gain matrix must be Nt x Nr");
    std::vector<CMatrix> x = aligned.x_aligned, y = aligned.y_aligned;
    for (std::size_t j = 0; j < x.size(); ++j)
    {
        const auto jj = static_cast<Eigen::Index>(j);
        x[j] = x[j] * gains.row(jj).asDiagonal();
        y[j] = y[j] * gains.row(jj).asDiagonal();
    }
    return AlignedData::from_matrices(std::move(x), std::move(y));
}

double invariance_campaign(const Scenario &scenario, std::size_t n_cases, std::uint64_t seed, const GainModel &gains)
{
    const std::vector<DetectorKind> detectors(invariant_detectors.begin(), invariant_detectors.end());
    Scenario h1 = scenario;
    if (std::isinf(h1.snr_avg_db))
        h1.snr_avg_db = 0.0;
    const TrialRunner null_runner(scenario), alt_runner(h1);
    const std::uint64_t tag = tag_value(StreamTag::Invariance);
    const auto nt = static_cast<Eigen::Index>(scenario.n_tx());
    const auto nr = static_cast<Eigen::Index>(scenario.n_rx());

    double worst = 0.0;
    for (std::size_t c = 0; c < n_cases; ++c)
    {
        const bool alternative = (c % 2) == 1;
        const AlignedData data = alternative ? alt_runner.aligned(seed, c, tag, Hypothesis::H1)
                                             : null_runner.aligned(seed, c, tag, Hypothesis::H0);
        Rng rng = make_stream(seed, c, tag | (std::uint64_t{1} << 32));
        CMatrix gamma(nt, nr);
        for (Eigen::Index j = 0; j < nt; ++j)
            for (Eigen::Index k = 0; k < nr; ++k)
            {
                const double u = 2.0 * uniform01(rng) - 1.0;
                const double phase = uniform_phase(rng);
                gamma(j, k) = std::polar(std::pow(10.0, gains.log10_span * u), gains.random_phase ? phase : 0.0);
            }
        const StatisticSet before = evaluate(data, detectors);
        const StatisticSet after = evaluate(scale_receivers(data, gamma), detectors);
        for (DetectorKind kind : detectors)
            worst = std::max(worst, relative_deviation(before[kind], after[kind]));
    }
    return worst;
}

} // namespace pasrad
