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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pasrad
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Per-trial random stream. Streams are keyed by (seed, trial, tag) so that the
// values drawn by one trial never depend on how trials are scheduled.
using Rng = std::mt19937_64;

Rng make_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t tag);

inline constexpr double speed_of_light = 299792458.0;
inline constexpr double two_pi = 6.283185307179586476925286766559;

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Invalid scenario, configuration file or threshold table.
class ConfigError : public Error
{
  public:
    using Error::Error;
};

// Input that makes a statistic undefined (zero columns, coincident points, ...).
class DegenerateInput : public Error
{
  public:
    using Error::Error;
};

// Too few trials for the requested false-alarm probability.
class GuardViolation : public Error
{
  public:
    using Error::Error;
};

} // namespace pasrad
