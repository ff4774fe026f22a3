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
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "pasrad/detectors.hpp"
#include "pasrad/scenario.hpp"
#include "pasrad/signal.hpp"

namespace pasrad
{

// Purpose tags separating the random streams of different campaigns.
enum class StreamTag : std::uint64_t
{
    Calibration = 1,
    FalseAlarm = 2,
    Detection = 3,
    Multipath = 4,
    Invariance = 5,
};

struct EngineOptions
{
    unsigned threads = 0; // 0: hardware concurrency
};

struct ThresholdTable
{
    double pfa = 0.0;
    double dnr_eta_db = 0.0;
    std::uint64_t n_trials = 0;
    std::uint64_t seed = 0;
    std::map<DetectorKind, double> thresholds;

    std::vector<DetectorKind> detectors() const;
};

struct Interval
{
    double low = 0.0;
    double high = 0.0;
};

struct DetectorEstimate
{
    DetectorKind detector = DetectorKind::LRT;
    std::uint64_t hits = 0;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct CurvePoint
{
    double sweep_value_db = 0.0;
    std::uint64_t n_trials = 0;
    std::vector<DetectorEstimate> estimates; // in ThresholdTable::detectors() order

    const DetectorEstimate &at(DetectorKind kind) const;
};

// 95% Wilson score interval for k successes in n trials.
Interval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.959963984540054);

// Element at 1-based index ceil(n (1 - pfa)) of the ascending sort.
double upper_quantile(std::vector<double> values, double pfa);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn);

// One Monte-Carlo trial: fresh waveforms, amplitude phases and noise from the
// stream (seed, trial, tag), then compensation and the requested statistics.
class TrialRunner
{
  public:
    explicit TrialRunner(const Scenario &scenario);

    const Scenario &scenario() const { return scenario_; }
    AlignedData aligned(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag, Hypothesis hypothesis) const;
    StatisticSet run(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag, Hypothesis hypothesis,
                     const std::vector<DetectorKind> &detectors) const;

  private:
    Scenario scenario_;
    PathOperators paths_;
};

// Statistics of n_trials independent trials, row i = trial i.
std::vector<StatisticSet> simulate(const Scenario &scenario, Hypothesis hypothesis,
                                   const std::vector<DetectorKind> &detectors, std::uint64_t n_trials,
                                   std::uint64_t seed, std::uint64_t tag, const EngineOptions &options = {});

// Upper (1 - pfa) quantiles of H0 statistics at the scenario's DNR.
ThresholdTable calibrate(const Scenario &scenario, const std::vector<DetectorKind> &detectors, double pfa,
                         std::uint64_t n_trials, std::uint64_t seed, const EngineOptions &options = {});

// Thresholds from an existing pool of H0 statistics.
ThresholdTable thresholds_from_pool(const std::vector<StatisticSet> &pool, const std::vector<DetectorKind> &detectors,
                                    double pfa, double dnr_eta_db, std::uint64_t seed);

// Fraction of statistics above threshold, per detector.
CurvePoint exceedance(const std::vector<StatisticSet> &pool, const ThresholdTable &thresholds, double sweep_value_db);

// H0 false-alarm rate versus DNR.
std::vector<CurvePoint> fap_curve(const Scenario &scenario, const ThresholdTable &thresholds,
                                  const std::vector<double> &dnr_sweep_db, std::uint64_t n_trials,
                                  std::uint64_t seed, const EngineOptions &options = {});

// H0 false-alarm rate versus MNR with the DNR held at the calibration value.
// The scenario must contain a scatterer.
std::vector<CurvePoint> mnr_curve(const Scenario &scenario, const ThresholdTable &thresholds,
                                  const std::vector<double> &mnr_sweep_db, std::uint64_t n_trials,
                                  std::uint64_t seed, const EngineOptions &options = {});

// H1 detection rate versus SNR at the scenario's DNR.
std::vector<CurvePoint> pd_curve(const Scenario &scenario, const ThresholdTable &thresholds,
                                 const std::vector<double> &snr_sweep_db, std::uint64_t n_trials, std::uint64_t seed,
                                 const EngineOptions &options = {});

struct GainModel
{
    double log10_span = 1.0; // |gamma| = 10^u, u uniform on [-span, span]
    bool random_phase = true;
};

// Largest relative change of LRT/AW/UG/AG/RD under random per-receiver
// complex scaling of both channels, over n_cases synthesized datasets.
double invariance_campaign(const Scenario &scenario, std::size_t n_cases, std::uint64_t seed,
                           const GainModel &gains = {});

double relative_deviation(double a, double b);

// Applies x_jk -> gamma_jk x_jk and y_jk -> gamma_jk y_jk.
AlignedData scale_receivers(const AlignedData &aligned, const CMatrix &gains);

} // namespace pasrad
