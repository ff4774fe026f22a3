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

#include "pasrad/detectors.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace pasrad
{

namespace
{

constexpr double min_denominator = 1e-300;

constexpr std::array<std::string_view, detector_count> names = {"LRT",    "AW",     "UG",     "AG",
                                                                "RD",     "P1_RAO", "P2_LRT", "P3_LRT"};

// Unified-family parameters (p, a, b) and the final map.
enum class Finish
{
    Identity,
    TwiceReal,
    TwiceAbs
};

struct UnifiedForm
{
    int p;
    int a;
    int b;
    Finish finish;
};

UnifiedForm unified_form(DetectorKind kind)
{
    switch (kind)
    {
    case DetectorKind::AW:
        return {4, 1, 1, Finish::Identity};
    case DetectorKind::UG:
        return {2, 1, 0, Finish::TwiceReal};
    case DetectorKind::AG:
        return {2, 1, 0, Finish::TwiceAbs};
    case DetectorKind::RD:
        return {0, 0, 0, Finish::Identity};
    default:
        throw std::invalid_argument("not a unified-family detector");
    }
}

// Rotates v so that its largest-magnitude entry is real and positive.
void fix_phase_by_peak(CVector &v)
{
    Eigen::Index peak = 0;
    v.cwiseAbs2().maxCoeff(&peak);
    const double mag = std::abs(v[peak]);
    if (mag > 0.0)
        v *= std::conj(v[peak]) / mag;
}

std::vector<TransmitterFit> fit_all(const AlignedData &aligned)
{
    std::vector<TransmitterFit> fits;
    fits.reserve(aligned.n_tx());
    for (std::size_t j = 0; j < aligned.n_tx(); ++j)
        fits.push_back(fit_transmitter(aligned, j));
    return fits;
}

double unified_from_fits(const std::vector<TransmitterFit> &fits, DetectorKind kind)
{
    const UnifiedForm form = unified_form(kind);
    cplx total = 0.0;
    for (const auto &fit : fits)
    {
        const double s0_norm_sq = fit.s0.squaredNorm();
        const double prefactor = std::pow(std::sqrt(s0_norm_sq) / fit.s1.norm(), form.p);
        const CVector &left = form.a == 0 ? fit.s0_x : fit.s1_x;
        const CVector &right = form.b == 0 ? fit.s0_x : fit.s1_x;
        cplx inner = 0.0;
        for (Eigen::Index k = 0; k < fit.weights.size(); ++k)
        {
            const double w = fit.weights[k];
            const double den = s0_norm_sq - w * std::norm(fit.s0_y[k]);
            if (!(den >= min_denominator))
                throw DegenerateInput("unified statistic denominator underflow");
            inner += w * left[k] * std::conj(right[k]) / den;
        }
        total += prefactor * inner;
    }
    switch (form.finish)
    {
    case Finish::TwiceReal:
        return 2.0 * total.real();
    case Finish::TwiceAbs:
        return 2.0 * std::abs(total);
    default:
        return total.real();
    }
}

// Baselines from any positive diagonal rescaling of X^H X; all three are
// invariant to that rescaling.
double baseline_from_covariance(const CMatrix &cov, DetectorKind kind)
{
    const RVector diag = cov.diagonal().real();
    for (Eigen::Index k = 0; k < diag.size(); ++k)
        if (!(diag[k] > 0.0))
            throw DegenerateInput("singular surveillance covariance diagonal");
    const Eigen::Index n = cov.rows();
    if (kind == DetectorKind::P1_RAO)
    {
        const CMatrix a = cov * diag.cwiseInverse().asDiagonal() - CMatrix::Identity(n, n);
        return 2.0 * (a * a).trace().real();
    }
    const RVector inv_sqrt = diag.cwiseSqrt().cwiseInverse();
    const CMatrix coherence = inv_sqrt.asDiagonal() * cov * inv_sqrt.asDiagonal();
    const RVector eig = Eigen::SelfAdjointEigenSolver<CMatrix>(coherence, Eigen::EigenvaluesOnly).eigenvalues();
    if (kind == DetectorKind::P2_LRT)
        return 1.0 / eig.prod();
    if (kind == DetectorKind::P3_LRT)
        return eig.maxCoeff();
    throw std::invalid_argument("not a baseline detector");
}

MleSet mle_from_fits(const AlignedData &aligned, const std::vector<TransmitterFit> &fits)
{
    const auto nt = static_cast<Eigen::Index>(aligned.n_tx());
    const auto nr = static_cast<Eigen::Index>(aligned.n_rx());
    const double two_l = 2.0 * static_cast<double>(aligned.length());
    MleSet m;
    m.sigma2_hat_0.resize(nt, nr);
    m.sigma2_hat_1.resize(nt, nr);
    m.alpha_hat.resize(nt, nr);
    m.beta_hat.resize(nt, nr);
    for (Eigen::Index j = 0; j < nt; ++j)
    {
        const TransmitterFit &fit = fits[static_cast<std::size_t>(j)];
        const double n0 = fit.s0.squaredNorm();
        const double n1 = fit.s1.squaredNorm();
        m.s_hat_0.push_back(fit.s0);
        m.s_hat_1.push_back(fit.s1);
        for (Eigen::Index k = 0; k < nr; ++k)
        {
            const double nx = aligned.col_norms_sq_x(j, k);
            const double ny = aligned.col_norms_sq_y(j, k);
            m.sigma2_hat_0(j, k) = (ny - std::norm(fit.s0_y[k]) / n0 + nx) / two_l;
            m.sigma2_hat_1(j, k) = (ny - std::norm(fit.s1_y[k]) / n1 + nx - std::norm(fit.s1_x[k]) / n1) / two_l;
            m.alpha_hat(j, k) = fit.s1_x[k] / n1;
            m.beta_hat(j, k) = fit.s1_y[k] / n1;
        }
    }
    return m;
}

} // namespace

std::string_view detector_name(DetectorKind kind)
{
    return names[static_cast<std::size_t>(kind)];
}

std::optional<DetectorKind> parse_detector(std::string_view name)
{
    for (std::size_t i = 0; i < detector_count; ++i)
        if (names[i] == name)
            return all_detectors[i];
    return std::nullopt;
}

bool is_unified(DetectorKind kind)
{
    return kind == DetectorKind::AW || kind == DetectorKind::UG || kind == DetectorKind::AG ||
           kind == DetectorKind::RD;
}

bool is_baseline(DetectorKind kind)
{
    return kind == DetectorKind::P1_RAO || kind == DetectorKind::P2_LRT || kind == DetectorKind::P3_LRT;
}

StatisticSet::StatisticSet()
{
    values.fill(std::numeric_limits<double>::quiet_NaN());
}

bool StatisticSet::has(DetectorKind kind) const
{
    return !std::isnan((*this)[kind]);
}

RVector xi_inverse(const AlignedData &aligned, std::size_t j)
{
    if (j >= aligned.n_tx())
        throw std::out_of_range("transmitter index out of range");
    const auto jj = static_cast<Eigen::Index>(j);
    const RVector total = aligned.col_norms_sq_x.row(jj).transpose() + aligned.col_norms_sq_y.row(jj).transpose();
    for (Eigen::Index k = 0; k < total.size(); ++k)
        if (!(total[k] > 0.0))
            throw DegenerateInput("zero surveillance and reference columns");
    return total.cwiseInverse();
}

TransmitterFit fit_transmitter(const AlignedData &aligned, std::size_t j)
{
    const CMatrix &x = aligned.x_aligned.at(j);
    const CMatrix &y = aligned.y_aligned.at(j);
    const Eigen::Index len = x.rows(), nr = x.cols();

    TransmitterFit fit;
    fit.weights = xi_inverse(aligned, j);
    RVector scale(2 * nr);
    scale << fit.weights.cwiseSqrt(), fit.weights.cwiseSqrt();

    CMatrix stacked(len, 2 * nr);
    stacked << y, x;
    fit.gram.noalias() = stacked.adjoint() * stacked;
    fit.gram = scale.asDiagonal() * fit.gram * scale.asDiagonal();

    Eigen::SelfAdjointEigenSolver<CMatrix> null_eig(fit.gram.topLeftCorner(nr, nr));
    fit.lambda_0 = null_eig.eigenvalues()[nr - 1];
    if (!(fit.lambda_0 > 0.0))
        throw DegenerateInput("reference data has rank zero");
    Eigen::SelfAdjointEigenSolver<CMatrix> alt_eig(fit.gram);
    fit.lambda_1 = alt_eig.eigenvalues()[2 * nr - 1];

    // Left singular vectors from the small eigenproblems: s = M v / sqrt(lambda).
    const CVector v0 = null_eig.eigenvectors().col(nr - 1);
    fit.s0 = y * (scale.head(nr).asDiagonal() * v0) / std::sqrt(fit.lambda_0);
    fit.s0.normalize();
    fix_phase_by_peak(fit.s0);

    const CVector v1 = alt_eig.eigenvectors().col(2 * nr - 1);
    fit.s1 = stacked * (scale.asDiagonal() * v1) / std::sqrt(fit.lambda_1);
    fit.s1.normalize();
    const cplx overlap = fit.s1.dot(fit.s0);
    if (std::abs(overlap) > 0.0)
        fit.s1 *= overlap / std::abs(overlap);

    fit.s0_x = (x.adjoint() * fit.s0).conjugate();
    fit.s0_y = (y.adjoint() * fit.s0).conjugate();
    fit.s1_x = (x.adjoint() * fit.s1).conjugate();
    fit.s1_y = (y.adjoint() * fit.s1).conjugate();
    return fit;
}

CVector s_hat_0(const AlignedData &aligned, std::size_t j)
{
    return fit_transmitter(aligned, j).s0;
}

CVector s_hat_1(const AlignedData &aligned, std::size_t j)
{
    return fit_transmitter(aligned, j).s1;
}

double lrt_statistic(const AlignedData &aligned)
{
    double total = 0.0;
    for (const auto &fit : fit_all(aligned))
        total += fit.lambda_1 - fit.lambda_0;
    return total;
}

double unified_statistic(const AlignedData &aligned, DetectorKind kind)
{
    unified_form(kind);
    return unified_from_fits(fit_all(aligned), kind);
}

double wald_usual_check(const AlignedData &aligned)
{
    const std::vector<TransmitterFit> fits = fit_all(aligned);
    const MleSet mle = mle_from_fits(aligned, fits);
    const auto nr = static_cast<Eigen::Index>(aligned.n_rx());
    double total = 0.0;
    for (Eigen::Index j = 0; j < mle.alpha_hat.rows(); ++j)
    {
        const RVector sigma2 = mle.sigma2_hat_1.row(j).transpose();
        // A zero residual variance leaves the weighting undefined; the
        // projection of a vector onto its own complement is zero regardless.
        if (!(sigma2.minCoeff() > 0.0))
            continue;
        const CVector a = sigma2.cwiseSqrt().cwiseInverse().asDiagonal() * mle.alpha_hat.row(j).transpose();
        const double a_norm_sq = a.squaredNorm();
        if (a_norm_sq == 0.0)
            continue;
        const CMatrix projector = CMatrix::Identity(nr, nr) - a * a.adjoint() / a_norm_sq;
        const double quad = a.dot(projector * a).real();
        total += mle.s_hat_1[static_cast<std::size_t>(j)].squaredNorm() * quad;
    }
    return 2.0 * total;
}

double durbin_statistic_independent(const AlignedData &aligned)
{
    const MleSet mle = mle_set(aligned);
    double total = 0.0;
    for (std::size_t j = 0; j < aligned.n_tx(); ++j)
    {
        const CVector &s0 = mle.s_hat_0[j];
        const CVector alpha_10 = (aligned.x_aligned[j].adjoint() * s0).conjugate() / s0.squaredNorm();
        const RMatrix info = fim_rr_block(s0, mle.sigma2_hat_0.row(static_cast<Eigen::Index>(j)).transpose());
        total += alpha_10.dot(info.cast<cplx>() * alpha_10).real();
    }
    return total / (2.0 * static_cast<double>(aligned.length()));
}

double baseline_statistic(const AlignedData &aligned, DetectorKind kind)
{
    if (!is_baseline(kind))
        throw std::invalid_argument("not a baseline detector");
    double total = 0.0;
    for (const auto &x : aligned.x_aligned)
        total += baseline_from_covariance(x.adjoint() * x, kind);
    return total;
}

MleSet mle_set(const AlignedData &aligned)
{
    return mle_from_fits(aligned, fit_all(aligned));
}

RMatrix fim_rr_block(const CVector &s, const RVector &sigma2)
{
    return (s.squaredNorm() * sigma2.cwiseInverse()).asDiagonal();
}

StatisticSet evaluate(const AlignedData &aligned, const std::vector<DetectorKind> &kinds)
{
    const std::vector<TransmitterFit> fits = fit_all(aligned);
    const auto nr = static_cast<Eigen::Index>(aligned.n_rx());
    StatisticSet out;
    for (DetectorKind kind : kinds)
    {
        if (kind == DetectorKind::LRT)
        {
            double total = 0.0;
            for (const auto &fit : fits)
                total += fit.lambda_1 - fit.lambda_0;
            out[kind] = total;
        }
        else if (is_unified(kind))
            out[kind] = unified_from_fits(fits, kind);
        else
        {
            double total = 0.0;
            for (const auto &fit : fits)
                total += baseline_from_covariance(fit.gram.bottomRightCorner(nr, nr), kind);
            out[kind] = total;
        }
    }
    return out;
}

} // namespace pasrad
