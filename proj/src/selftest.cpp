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

#include "pasrad/selftest.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "pasrad/montecarlo.hpp"
#include "pasrad/random.hpp"

namespace pasrad
{

namespace
{

constexpr std::uint64_t dataset_tag = 0x5e1f7e57;

double log_uniform(Rng &rng, double lo_exp, double hi_exp)
{
    return std::pow(10.0, lo_exp + (hi_exp - lo_exp) * uniform01(rng));
}

// Dominant eigenvector of an L x L Hermitian matrix, unit norm, no phase fix.
std::pair<double, CVector> dominant(const CMatrix &a)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    const Eigen::Index last = a.rows() - 1;
    return {es.eigenvalues()[last], es.eigenvectors().col(last)};
}

IdentityCheck make_check(std::string name, std::size_t cases, double worst, double tolerance)
{
    IdentityCheck c;
    c.name = std::move(name);
    c.cases = cases;
    c.worst = worst;
    c.tolerance = tolerance;
    c.passed = std::isfinite(worst) && worst < tolerance;
    return c;
}

} // namespace

AlignedData random_dataset(std::uint64_t seed, std::uint64_t index, std::size_t length, std::size_t n_tx,
                           std::size_t n_rx)
{
    Rng rng = make_stream(seed, index, dataset_tag);
    NormalSource normal;
    const bool target = (index % 2) == 1;
    const double scale = log_uniform(rng, -13.0, 0.0);
    const auto rows = static_cast<Eigen::Index>(length), cols = static_cast<Eigen::Index>(n_rx);
    std::vector<CMatrix> x(n_tx, CMatrix(rows, cols)), y(n_tx, CMatrix(rows, cols));
    for (std::size_t j = 0; j < n_tx; ++j)
    {
        const CVector s = generate_waveform(length, rng).samples;
        for (Eigen::Index k = 0; k < cols; ++k)
        {
            const double var = scale * log_uniform(rng, -0.5, 0.5);
            const cplx beta = std::polar(std::sqrt(var * log_uniform(rng, -1.5, 1.5)), uniform_phase(rng));
            const cplx alpha =
                target ? std::polar(std::sqrt(var * log_uniform(rng, -2.0, 1.0)), uniform_phase(rng)) : cplx(0.0);
            for (Eigen::Index n = 0; n < rows; ++n)
            {
                y[j](n, k) = beta * s[n] + complex_gaussian(rng, normal, var);
                x[j](n, k) = alpha * s[n] + complex_gaussian(rng, normal, var);
            }
        }
    }
    return AlignedData::from_matrices(std::move(x), std::move(y));
}

DenseStatistics dense_statistics(const AlignedData &aligned)
{
    DenseStatistics out;
    cplx aw = 0.0, ug = 0.0, rd = 0.0;
    const auto len = static_cast<Eigen::Index>(aligned.length());
    const CMatrix identity = CMatrix::Identity(len, len);
    for (std::size_t j = 0; j < aligned.n_tx(); ++j)
    {
        const CMatrix &x = aligned.x_aligned[j];
        const CMatrix &y = aligned.y_aligned[j];
        const RVector w = xi_inverse(aligned, j);
        const CMatrix null_gram = y * w.asDiagonal() * y.adjoint();
        const CMatrix alt_gram = null_gram + x * w.asDiagonal() * x.adjoint();
        auto [lambda_0, s0] = dominant(null_gram);
        auto [lambda_1, s1] = dominant(alt_gram);
        out.lrt += lambda_1 - lambda_0;

        Eigen::Index peak = 0;
        s0.cwiseAbs2().maxCoeff(&peak);
        s0 *= std::conj(s0[peak]) / std::abs(s0[peak]);
        const cplx overlap = s1.dot(s0);
        s1 *= overlap / std::abs(overlap);

        for (Eigen::Index k = 0; k < x.cols(); ++k)
        {
            const CMatrix target_part = w[k] * x.col(k) * x.col(k).adjoint();
            const CMatrix null_part = identity - w[k] * y.col(k) * y.col(k).adjoint();
            const cplx den = s0.dot(null_part * s0);
            rd += s0.dot(target_part * s0) / den;
            aw += s1.dot(target_part * s1) / den;
            ug += s1.dot(target_part * s0) / den;
        }
    }
    out.aw = aw.real();
    out.rd = rd.real();
    out.ug = 2.0 * ug.real();
    out.ag = 2.0 * std::abs(ug);
    return out;
}

std::vector<IdentityCheck> run_selftest(const SelftestOptions &options)
{
    const std::size_t cases = std::max<std::size_t>(options.cases, 1);
    std::vector<IdentityCheck> checks;

    Scenario scenario = default_scenario();
    scenario.n_samples = 64;
    scenario.snr_avg_db = -5.0;
    checks.push_back(make_check("scaling invariance", cases, invariance_campaign(scenario, cases, options.seed), 1e-10));

    double durbin = 0.0, wald = 0.0, dense = 0.0;
    for (std::size_t c = 0; c < cases; ++c)
    {
        const AlignedData data = random_dataset(options.seed, c, 64, 2, 3);
        const double rd = unified_statistic(data, DetectorKind::RD);
        const double d = durbin_statistic_independent(data) * (1.0 + options.durbin_perturbation);
        durbin = std::max(durbin, relative_deviation(rd, d));
        wald = std::max(wald, std::abs(wald_usual_check(data)));

        const AlignedData small = random_dataset(options.seed, cases + c, 6, 2, 3);
        const DenseStatistics ref = dense_statistics(small);
        const StatisticSet fast = evaluate(small, {DetectorKind::LRT, DetectorKind::AW, DetectorKind::UG,
                                                   DetectorKind::AG, DetectorKind::RD});
        for (auto [kind, value] : {std::pair{DetectorKind::LRT, ref.lrt}, std::pair{DetectorKind::AW, ref.aw},
                                   std::pair{DetectorKind::UG, ref.ug}, std::pair{DetectorKind::AG, ref.ag},
                                   std::pair{DetectorKind::RD, ref.rd}})
            dense = std::max(dense, relative_deviation(fast[kind], value));
    }
    checks.push_back(make_check("durbin equals rao", cases, durbin, 1e-10));
    checks.push_back(make_check("usual wald is zero", cases, wald, 1e-8));
    checks.push_back(make_check("dense oracle (L=6)", cases, dense, 1e-10));

    double unitarity = 0.0, inversion = 0.0;
    Rng rng = make_stream(options.seed, 0, 0x0be7a70e);
    NormalSource normal;
    const std::size_t len = 256;
    const double fs = 10e6;
    for (std::size_t c = 0; c < cases; ++c)
    {
        CVector v(static_cast<Eigen::Index>(len));
        for (auto &e : v)
            e = complex_gaussian(rng, normal, 1.0);
        const double delay = 300.0 * uniform01(rng) / fs;
        const double doppler = (2.0 * uniform01(rng) - 1.0) * fs / 4.0;
        const DelayDopplerOperator op(len, delay, doppler, fs);
        const CVector out = op.apply(v);
        unitarity = std::max(unitarity, std::abs(out.norm() - v.norm()) / v.norm());
        inversion = std::max(inversion, (op.apply_adjoint(out) - v).cwiseAbs().maxCoeff());
    }
    checks.push_back(make_check("operator unitarity", cases, unitarity, 1e-12));
    checks.push_back(make_check("adjoint inversion", cases, inversion, 1e-10));
    return checks;
}

} // namespace pasrad
