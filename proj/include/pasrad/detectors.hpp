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

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pasrad/common.hpp"
#include "pasrad/signal.hpp"

namespace pasrad
{

enum class DetectorKind
{
    LRT,
    AW,     // alternative Wald
    UG,     // usual Gradient
    AG,     // alternative Gradient
    RD,     // Rao / Durbin
    P1_RAO, // single-channel baselines, surveillance data only
    P2_LRT,
    P3_LRT
};

inline constexpr std::size_t detector_count = 8;

inline constexpr std::array<DetectorKind, detector_count> all_detectors = {
    DetectorKind::LRT,    DetectorKind::AW,     DetectorKind::UG,     DetectorKind::AG,
    DetectorKind::RD,     DetectorKind::P1_RAO, DetectorKind::P2_LRT, DetectorKind::P3_LRT};

std::string_view detector_name(DetectorKind kind);
std::optional<DetectorKind> parse_detector(std::string_view name);
bool is_unified(DetectorKind kind);
bool is_baseline(DetectorKind kind);

// Statistic values indexed by DetectorKind; NaN marks "not computed".
struct StatisticSet
{
    std::array<double, detector_count> values;

    StatisticSet();
    bool has(DetectorKind kind) const;
    double operator[](DetectorKind kind) const { return values[static_cast<std::size_t>(kind)]; }
    double &operator[](DetectorKind kind) { return values[static_cast<std::size_t>(kind)]; }
};

struct MleSet
{
    std::vector<CVector> s_hat_0;
    std::vector<CVector> s_hat_1;
    RMatrix sigma2_hat_0; // Nt x Nr
    RMatrix sigma2_hat_1;
    CMatrix alpha_hat;
    CMatrix beta_hat;
};

// Shared per-transmitter quantities: column weights w_k = 1/(|x_k|^2 + |y_k|^2),
// the weighted Gram matrix of [Y X], its dominant eigenpairs and the unit
// signal estimates under both hypotheses with their inner products.
struct TransmitterFit
{
    RVector weights;
    CMatrix gram; // 2Nr x 2Nr, reference block first
    double lambda_0 = 0.0;
    double lambda_1 = 0.0;
    CVector s0;
    CVector s1;
    CVector s0_x; // s0^H x_k
    CVector s0_y; // s0^H y_k
    CVector s1_x;
    CVector s1_y;
};

TransmitterFit fit_transmitter(const AlignedData &aligned, std::size_t j);

RVector xi_inverse(const AlignedData &aligned, std::size_t j);
CVector s_hat_0(const AlignedData &aligned, std::size_t j);
CVector s_hat_1(const AlignedData &aligned, std::size_t j);

double lrt_statistic(const AlignedData &aligned);
double unified_statistic(const AlignedData &aligned, DetectorKind kind);
double wald_usual_check(const AlignedData &aligned);

// Durbin form built from the null-hypothesis estimates and the FIM block,
// divided by 2L so it is on the scale of the unified RD statistic.
double durbin_statistic_independent(const AlignedData &aligned);

double baseline_statistic(const AlignedData &aligned, DetectorKind kind);
MleSet mle_set(const AlignedData &aligned);
RMatrix fim_rr_block(const CVector &s, const RVector &sigma2);

// All requested statistics from one fit per transmitter.
StatisticSet evaluate(const AlignedData &aligned, const std::vector<DetectorKind> &kinds);

} // namespace pasrad
