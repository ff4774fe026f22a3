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

#include <boost/random/normal_distribution.hpp>

#include "pasrad/common.hpp"

namespace pasrad
{

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_phase(Rng &rng)
{
    return two_pi * uniform01(rng);
}

// Standard normal draws (ziggurat).
class NormalSource
{
  public:
    double operator()(Rng &rng) { return dist_(rng); }

  private:
    boost::random::normal_distribution<double> dist_{0.0, 1.0};
};

// Circular complex Gaussian with total variance `variance`.
inline cplx complex_gaussian(Rng &rng, NormalSource &normal, double variance)
{
    const double sd = std::sqrt(0.5 * variance);
    const double re = normal(rng);
    const double im = normal(rng);
    return {sd * re, sd * im};
}

} // namespace pasrad
