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

#include "pasrad/signal.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "pasrad/random.hpp"

namespace pasrad
{

static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");

namespace
{

// The FFTW planner is not thread-safe.
std::mutex &planner_mutex()
{
    static std::mutex m;
    return m;
}

// Phase in cycles reduced to [0, 1) before the sin/cos evaluation.
cplx unit_phasor(double cycles)
{
    cycles -= std::floor(cycles);
    return std::polar(1.0, two_pi * cycles);
}

} // namespace

AlignedData AlignedData::from_matrices(std::vector<CMatrix> x, std::vector<CMatrix> y)
{
    if (x.size() != y.size() || x.empty())
        throw DegenerateInput("surveillance and reference data must have the same non-zero transmitter count");
    const Eigen::Index rows = x[0].rows(), cols = x[0].cols();
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j].rows() != rows || x[j].cols() != cols || y[j].rows() != rows || y[j].cols() != cols)
            throw DegenerateInput("all data matrices must share one shape");

    AlignedData a;
    const auto nt = static_cast<Eigen::Index>(x.size());
    a.col_norms_sq_x.resize(nt, cols);
    a.col_norms_sq_y.resize(nt, cols);
    for (Eigen::Index j = 0; j < nt; ++j)
    {
        a.col_norms_sq_x.row(j) = x[static_cast<std::size_t>(j)].colwise().squaredNorm();
        a.col_norms_sq_y.row(j) = y[static_cast<std::size_t>(j)].colwise().squaredNorm();
    }
    a.x_aligned = std::move(x);
    a.y_aligned = std::move(y);
    return a;
}

Fft::Fft(std::size_t n) : n_(n)
{
    if (n == 0)
        throw DegenerateInput("FFT length must be positive");
    std::lock_guard<std::mutex> lock(planner_mutex());
    buffer_ = reinterpret_cast<cplx *>(fftw_alloc_complex(n));
    auto *buf = reinterpret_cast<fftw_complex *>(buffer_);
    // FFTW_ESTIMATE keeps the plan, and hence the rounding, identical across runs.
    forward_plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    fftw_free(buffer_);
}

void Fft::forward()
{
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
}

void Fft::backward()
{
    fftw_execute(static_cast<fftw_plan>(backward_plan_));
}

Fft &thread_fft(std::size_t n)
{
    thread_local std::map<std::size_t, std::unique_ptr<Fft>> cache;
    auto &slot = cache[n];
    if (!slot)
        slot = std::make_unique<Fft>(n);
    return *slot;
}

DelayDopplerOperator::DelayDopplerOperator(std::size_t length, double delay, double doppler, double sample_rate)
    : n_(length), has_delay_(delay != 0.0), has_doppler_(doppler != 0.0)
{
    if (!(sample_rate > 0.0))
        throw DegenerateInput("sample rate must be positive");
    if (length == 0)
        throw DegenerateInput("operator length must be positive");
    const auto n = static_cast<Eigen::Index>(length);
    if (has_delay_)
    {
        const double bin_step = delay * sample_rate / static_cast<double>(length);
        bin_ramp_.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            bin_ramp_[i] = unit_phasor(static_cast<double>(i) * bin_step);
    }
    if (has_doppler_)
    {
        const double step = doppler / sample_rate;
        time_ramp_.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            time_ramp_[i] = unit_phasor(-static_cast<double>(i) * step);
    }
}

void DelayDopplerOperator::apply_to_spectrum(const cplx *spectrum, cplx *out) const
{
    Fft &fft = thread_fft(n_);
    cplx *buf = fft.data();
    if (has_delay_)
        for (std::size_t i = 0; i < n_; ++i)
            buf[i] = spectrum[i] * bin_ramp_[static_cast<Eigen::Index>(i)];
    else
        std::memmove(static_cast<void *>(buf), spectrum, n_ * sizeof(cplx));
    fft.backward();
    const double scale = 1.0 / static_cast<double>(n_);
    if (has_doppler_)
        for (std::size_t i = 0; i < n_; ++i)
            out[i] = buf[i] * scale * time_ramp_[static_cast<Eigen::Index>(i)];
    else
        for (std::size_t i = 0; i < n_; ++i)
            out[i] = buf[i] * scale;
}

void DelayDopplerOperator::apply(const cplx *in, cplx *out) const
{
    if (!has_delay_)
    {
        // B(0) = I and F^H F = I: only the modulation remains.
        for (std::size_t i = 0; i < n_; ++i)
            out[i] = has_doppler_ ? in[i] * time_ramp_[static_cast<Eigen::Index>(i)] : in[i];
        return;
    }
    Fft &fft = thread_fft(n_);
    std::memmove(static_cast<void *>(fft.data()), in, n_ * sizeof(cplx));
    fft.forward();
    apply_to_spectrum(fft.data(), out);
}

void DelayDopplerOperator::apply_adjoint(const cplx *in, cplx *out) const
{
    if (!has_delay_)
    {
        for (std::size_t i = 0; i < n_; ++i)
            out[i] = has_doppler_ ? in[i] * std::conj(time_ramp_[static_cast<Eigen::Index>(i)]) : in[i];
        return;
    }
    Fft &fft = thread_fft(n_);
    cplx *buf = fft.data();
    if (has_doppler_)
        for (std::size_t i = 0; i < n_; ++i)
            buf[i] = in[i] * std::conj(time_ramp_[static_cast<Eigen::Index>(i)]);
    else
        std::memmove(static_cast<void *>(buf), in, n_ * sizeof(cplx));
    fft.forward();
    for (std::size_t i = 0; i < n_; ++i)
        buf[i] *= std::conj(bin_ramp_[static_cast<Eigen::Index>(i)]);
    fft.backward();
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i)
        out[i] = buf[i] * scale;
}

CVector DelayDopplerOperator::apply(const CVector &v) const
{
    if (static_cast<std::size_t>(v.size()) != n_)
        throw DegenerateInput("vector length does not match the operator");
    CVector out(v.size());
    apply(v.data(), out.data());
    return out;
}

CVector DelayDopplerOperator::apply_adjoint(const CVector &v) const
{
    if (static_cast<std::size_t>(v.size()) != n_)
        throw DegenerateInput("vector length does not match the operator");
    CVector out(v.size());
    apply_adjoint(v.data(), out.data());
    return out;
}

CVector delay_doppler_apply(const CVector &v, double delay, double doppler, double sample_rate)
{
    return DelayDopplerOperator(static_cast<std::size_t>(v.size()), delay, doppler, sample_rate).apply(v);
}

PathOperators::PathOperators(const PathGeometry &g, std::size_t len, double sample_rate)
    : length(len), n_tx(static_cast<std::size_t>(g.direct_delays.rows())),
      n_rx(static_cast<std::size_t>(g.direct_delays.cols()))
{
    direct.reserve(n_tx * n_rx);
    target.reserve(n_tx * n_rx);
    for (std::size_t j = 0; j < n_tx; ++j)
        for (std::size_t k = 0; k < n_rx; ++k)
        {
            const auto jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
            direct.emplace_back(len, g.direct_delays(jj, kk), 0.0, sample_rate);
            target.emplace_back(len, g.target_delays(jj, kk), g.target_dopplers(jj, kk), sample_rate);
            if (g.scatterer_delays)
                scatterer.emplace_back(len, (*g.scatterer_delays)(jj, kk), 0.0, sample_rate);
        }
}

Waveform generate_waveform(std::size_t length, Rng &rng)
{
    if (length == 0)
        throw DegenerateInput("waveform length must be positive");
    Waveform w;
    w.samples.resize(static_cast<Eigen::Index>(length));
    for (auto &s : w.samples)
        s = std::polar(1.0, -uniform_phase(rng));
    return w;
}

Observation synthesize(const Scenario &scenario, const ChannelAmplitudes &amplitudes, const PathGeometry &geometry,
                       Hypothesis hypothesis, Rng &rng)
{
    std::vector<Waveform> waveforms;
    for (std::size_t j = 0; j < scenario.n_tx(); ++j)
        waveforms.push_back(generate_waveform(scenario.n_samples, rng));
    const PathOperators paths(geometry, scenario.n_samples, scenario.sample_rate);
    return synthesize(scenario, amplitudes, paths, waveforms, hypothesis, rng);
}

Observation synthesize(const Scenario &scenario, const ChannelAmplitudes &amplitudes, const PathOperators &paths,
                       const std::vector<Waveform> &waveforms, Hypothesis hypothesis, Rng &rng)
{
    const std::size_t nt = scenario.n_tx(), nr = scenario.n_rx(), len = scenario.n_samples;
    const auto rows = static_cast<Eigen::Index>(len), cols = static_cast<Eigen::Index>(nr);
    if (waveforms.size() != nt || paths.n_tx != nt || paths.n_rx != nr || paths.length != len ||
        static_cast<std::size_t>(amplitudes.alpha.rows()) != nt ||
        static_cast<std::size_t>(amplitudes.alpha.cols()) != nr ||
        static_cast<std::size_t>(amplitudes.beta.rows()) != nt ||
        static_cast<std::size_t>(amplitudes.beta.cols()) != nr)
        throw DegenerateInput("synthesis inputs have inconsistent dimensions");
    for (const auto &w : waveforms)
        if (w.samples.size() != rows)
            throw DegenerateInput("waveform length does not match the scenario");
    const bool multipath = amplitudes.zeta.has_value() && !paths.scatterer.empty();

    Observation obs;
    obs.truth = hypothesis;
    obs.x.assign(nt, CMatrix::Zero(rows, cols));
    obs.y.assign(nt, CMatrix::Zero(rows, cols));

    NormalSource normal;
    CVector spectrum(rows), path(rows);
    for (std::size_t j = 0; j < nt; ++j)
    {
        Fft &fft = thread_fft(len);
        std::memcpy(static_cast<void *>(fft.data()), waveforms[j].samples.data(), len * sizeof(cplx));
        fft.forward();
        std::memcpy(static_cast<void *>(spectrum.data()), fft.data(), len * sizeof(cplx));

        const auto jj = static_cast<Eigen::Index>(j);
        for (std::size_t k = 0; k < nr; ++k)
        {
            const auto kk = static_cast<Eigen::Index>(k);
            auto y = obs.y[j].col(kk);
            auto x = obs.x[j].col(kk);

            paths.direct_path(j, k).apply_to_spectrum(spectrum.data(), path.data());
            y = amplitudes.beta(jj, kk) * path;
            if (multipath)
            {
                paths.scatterer_path(j, k).apply_to_spectrum(spectrum.data(), path.data());
                y += (*amplitudes.zeta)(jj, kk) * path;
            }
            if (hypothesis == Hypothesis::H1 && amplitudes.alpha(jj, kk) != cplx(0.0, 0.0))
            {
                paths.target_path(j, k).apply_to_spectrum(spectrum.data(), path.data());
                x = amplitudes.alpha(jj, kk) * path;
            }

            const double var = scenario.noise_variances(jj, kk);
            for (Eigen::Index n = 0; n < rows; ++n)
                y[n] += complex_gaussian(rng, normal, var);
            for (Eigen::Index n = 0; n < rows; ++n)
                x[n] += complex_gaussian(rng, normal, var);
        }
    }
    return obs;
}

AlignedData compensate(const Observation &obs, const PathGeometry &geometry, double sample_rate)
{
    if (obs.x.empty())
        throw DegenerateInput("empty observation");
    const PathOperators paths(geometry, static_cast<std::size_t>(obs.x[0].rows()), sample_rate);
    return compensate(obs, paths);
}

AlignedData compensate(const Observation &obs, const PathOperators &paths)
{
    const std::size_t nt = obs.x.size();
    if (nt != paths.n_tx || obs.y.size() != nt)
        throw DegenerateInput("geometry does not match the observation");
    std::vector<CMatrix> x(nt), y(nt);
    for (std::size_t j = 0; j < nt; ++j)
    {
        if (static_cast<std::size_t>(obs.x[j].rows()) != paths.length ||
            static_cast<std::size_t>(obs.x[j].cols()) != paths.n_rx || obs.y[j].rows() != obs.x[j].rows() ||
            obs.y[j].cols() != obs.x[j].cols())
            throw DegenerateInput("geometry does not match the observation");
        x[j].resize(obs.x[j].rows(), obs.x[j].cols());
        y[j].resize(obs.y[j].rows(), obs.y[j].cols());
        for (std::size_t k = 0; k < paths.n_rx; ++k)
        {
            const auto kk = static_cast<Eigen::Index>(k);
            paths.target_path(j, k).apply_adjoint(obs.x[j].col(kk).data(), x[j].col(kk).data());
            paths.direct_path(j, k).apply_adjoint(obs.y[j].col(kk).data(), y[j].col(kk).data());
        }
    }
    return AlignedData::from_matrices(std::move(x), std::move(y));
}

namespace
{

constexpr char dump_magic[8] = {'P', 'A', 'S', 'R', 'A', 'D', 'O', 'B'};

void write_matrix(std::ofstream &out, const CMatrix &m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            const double re = m(r, c).real(), im = m(r, c).imag();
            out.write(reinterpret_cast<const char *>(&re), sizeof re);
            out.write(reinterpret_cast<const char *>(&im), sizeof im);
        }
}

void read_matrix(std::ifstream &in, CMatrix &m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            double re = 0.0, im = 0.0;
            in.read(reinterpret_cast<char *>(&re), sizeof re);
            in.read(reinterpret_cast<char *>(&im), sizeof im);
            m(r, c) = {re, im};
        }
}

} // namespace

void write_observation(const std::string &path, const Observation &obs)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    const std::uint64_t dims[3] = {obs.x.empty() ? 0u : static_cast<std::uint64_t>(obs.x[0].rows()),
                                   obs.x.empty() ? 0u : static_cast<std::uint64_t>(obs.x[0].cols()),
                                   static_cast<std::uint64_t>(obs.x.size())};
    out.write(dump_magic, sizeof dump_magic);
    out.write(reinterpret_cast<const char *>(dims), sizeof dims);
    for (std::size_t j = 0; j < obs.x.size(); ++j)
    {
        write_matrix(out, obs.x[j]);
        write_matrix(out, obs.y[j]);
    }
    if (!out)
        throw Error("failed writing " + path);
}

Observation read_observation(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    char magic[8];
    std::uint64_t dims[3];
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char *>(dims), sizeof dims);
    if (!in || std::memcmp(magic, dump_magic, sizeof magic) != 0)
        throw Error(path + " is not an observation dump");
    Observation obs;
    const auto rows = static_cast<Eigen::Index>(dims[0]), cols = static_cast<Eigen::Index>(dims[1]);
    obs.x.assign(dims[2], CMatrix(rows, cols));
    obs.y.assign(dims[2], CMatrix(rows, cols));
    for (std::size_t j = 0; j < dims[2]; ++j)
    {
        read_matrix(in, obs.x[j]);
        read_matrix(in, obs.y[j]);
    }
    if (!in)
        throw Error(path + " is truncated");
    return obs;
}

} // namespace pasrad
