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
#include <optional>
#include <string>
#include <vector>

#include "pasrad/common.hpp"
#include "pasrad/scenario.hpp"

namespace pasrad
{

struct Waveform
{
    CVector samples;
};

enum class Hypothesis
{
    H0,
    H1
};

// Raw per-transmitter data: x[j] is the surveillance matrix and y[j] the
// reference matrix, both L x Nr with one column per receiver.
struct Observation
{
    std::vector<CMatrix> x;
    std::vector<CMatrix> y;
    Hypothesis truth = Hypothesis::H0;
};

// Delay/Doppler compensated data with cached squared column norms (Nt x Nr).
struct AlignedData
{
    std::vector<CMatrix> x_aligned;
    std::vector<CMatrix> y_aligned;
    RMatrix col_norms_sq_x;
    RMatrix col_norms_sq_y;

    std::size_t n_tx() const { return x_aligned.size(); }
    std::size_t n_rx() const { return x_aligned.empty() ? 0 : static_cast<std::size_t>(x_aligned[0].cols()); }
    std::size_t length() const { return x_aligned.empty() ? 0 : static_cast<std::size_t>(x_aligned[0].rows()); }

    // Takes ownership of the matrices and computes the norm caches.
    static AlignedData from_matrices(std::vector<CMatrix> x, std::vector<CMatrix> y);
};

// In-place unnormalized FFT of fixed length on an aligned internal buffer.
// Not thread-safe; use thread_fft() to get a per-thread instance.
class Fft
{
  public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft &) = delete;
    Fft &operator=(const Fft &) = delete;

    std::size_t size() const { return n_; }
    cplx *data() { return buffer_; }
    void forward();
    void backward();

  private:
    std::size_t n_;
    cplx *buffer_;
    void *forward_plan_;
    void *backward_plan_;
};

Fft &thread_fft(std::size_t n);

// D_tau(f) = B(f/fs) F^H B(-tau fs/L) F with [B(a)]_ii = exp(-j 2 pi i a),
// i = 0..L-1, and F the unitary DFT. Circular by construction.
class DelayDopplerOperator
{
  public:
    DelayDopplerOperator() = default;
    DelayDopplerOperator(std::size_t length, double delay, double doppler, double sample_rate);

    std::size_t length() const { return n_; }

    // out may alias in.
    void apply(const cplx *in, cplx *out) const;
    void apply_adjoint(const cplx *in, cplx *out) const;

    // Applies the operator to a vector given by its unnormalized DFT.
    void apply_to_spectrum(const cplx *spectrum, cplx *out) const;

    CVector apply(const CVector &v) const;
    CVector apply_adjoint(const CVector &v) const;

  private:
    std::size_t n_ = 0;
    bool has_delay_ = false;
    bool has_doppler_ = false;
    CVector bin_ramp_;  // exp(+j 2 pi i tau fs / L)
    CVector time_ramp_; // exp(-j 2 pi n f / fs)
};

CVector delay_doppler_apply(const CVector &v, double delay, double doppler, double sample_rate);

// Precomputed operators for every propagation path of a fixed geometry.
struct PathOperators
{
    std::size_t length = 0;
    std::vector<DelayDopplerOperator> direct;    // index j * Nr + k
    std::vector<DelayDopplerOperator> target;    // index j * Nr + k
    std::vector<DelayDopplerOperator> scatterer; // empty without multipath
    std::size_t n_tx = 0;
    std::size_t n_rx = 0;

    PathOperators() = default;
    PathOperators(const PathGeometry &geometry, std::size_t length, double sample_rate);

    const DelayDopplerOperator &direct_path(std::size_t j, std::size_t k) const { return direct[j * n_rx + k]; }
    const DelayDopplerOperator &target_path(std::size_t j, std::size_t k) const { return target[j * n_rx + k]; }
    const DelayDopplerOperator &scatterer_path(std::size_t j, std::size_t k) const { return scatterer[j * n_rx + k]; }
};

Waveform generate_waveform(std::size_t length, Rng &rng);

// Draws one waveform per transmitter, then the noise, from rng.
Observation synthesize(const Scenario &scenario, const ChannelAmplitudes &amplitudes, const PathGeometry &geometry,
                       Hypothesis hypothesis, Rng &rng);

// Noise is drawn per (j, k) in transmitter-major order, reference column
// first. Multipath is added when both the amplitudes and operators carry it.
Observation synthesize(const Scenario &scenario, const ChannelAmplitudes &amplitudes, const PathOperators &paths,
                       const std::vector<Waveform> &waveforms, Hypothesis hypothesis, Rng &rng);

AlignedData compensate(const Observation &obs, const PathGeometry &geometry, double sample_rate);
AlignedData compensate(const Observation &obs, const PathOperators &paths);

// Binary dump: 32-byte header ("PASRADOB", L, Nr, Nt as uint64) followed, per
// transmitter, by X_j then Y_j as row-major little-endian float64 re/im pairs.
void write_observation(const std::string &path, const Observation &obs);
Observation read_observation(const std::string &path);

} // namespace pasrad
