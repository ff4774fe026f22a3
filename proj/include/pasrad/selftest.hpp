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
#include <string>
#include <vector>

#include "pasrad/detectors.hpp"
#include "pasrad/signal.hpp"

namespace pasrad
{

// Aligned rank-one-plus-noise data: y_jk = beta_jk s_j + e_jk and, for odd
// `index`, x_jk = alpha_jk s_j + n_jk (x_jk = n_jk otherwise). Amplitudes,
// noise levels and overall scale are drawn over several decades.
AlignedData random_dataset(std::uint64_t seed, std::uint64_t index, std::size_t length, std::size_t n_tx,
                           std::size_t n_rx);

struct DenseStatistics
{
    double lrt = 0.0;
    double aw = 0.0;
    double ug = 0.0;
    double ag = 0.0;
    double rd = 0.0;
};

// Statistics from explicitly formed L x L Gram matrices. Only meant for small L.
DenseStatistics dense_statistics(const AlignedData &aligned);

struct IdentityCheck
{
    std::string name;
    std::size_t cases = 0;
    double worst = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct SelftestOptions
{
    std::size_t cases = 200;
    std::uint64_t seed = 1;
    double durbin_perturbation = 0.0; // relative error injected into the Durbin path
};

std::vector<IdentityCheck> run_selftest(const SelftestOptions &options);

} // namespace pasrad
