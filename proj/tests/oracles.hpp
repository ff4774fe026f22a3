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

// Reference implementations used only by the tests. They take the long way
// round (explicit matrices, general eigensolvers, finite differences) so that
// they do not share code paths with the library.

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pasrad/detectors.hpp"
#include "pasrad/signal.hpp"

namespace oracle
{

using pasrad::CMatrix;
using pasrad::cplx;
using pasrad::CVector;
using pasrad::RMatrix;
using pasrad::RVector;

constexpr double pi = 3.14159265358979323846;

inline CVector random_vector(std::mt19937_64 &g, Eigen::Index n, double sd = 1.0)
{
    std::normal_distribution<double> normal(0.0, sd);
    CVector v(n);
    for (auto &e : v)
        e = cplx(normal(g), normal(g));
    return v;
}

inline CMatrix random_matrix(std::mt19937_64 &g, Eigen::Index rows, Eigen::Index cols, double sd = 1.0)
{
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        m.col(c) = random_vector(g, rows, sd);
    return m;
}

// Unitary DFT matrix, [F]_{ab} = exp(-j 2 pi a b / L) / sqrt(L) with 0-based a, b.
inline CMatrix dft_matrix(Eigen::Index len)
{
    CMatrix f(len, len);
    for (Eigen::Index a = 0; a < len; ++a)
        for (Eigen::Index b = 0; b < len; ++b)
            f(a, b) = std::polar(1.0 / std::sqrt(double(len)), -2.0 * pi * double(a * b % len) / double(len));
    return f;
}

// Diagonal B(a) with entries exp(-j 2 pi (i - 1) a), i = 1..L.
inline CMatrix phase_diagonal(Eigen::Index len, double a)
{
    CMatrix b = CMatrix::Zero(len, len);
    for (Eigen::Index i = 1; i <= len; ++i)
        b(i - 1, i - 1) = std::exp(cplx(0.0, -2.0 * pi * double(i - 1) * a));
    return b;
}

// The delay-Doppler operator as an explicit L x L matrix.
inline CMatrix dense_operator(Eigen::Index len, double delay, double doppler, double fs)
{
    const CMatrix f = dft_matrix(len);
    const double df = fs / double(len);
    return phase_diagonal(len, doppler / fs) * f.adjoint() * phase_diagonal(len, -delay * df) * f;
}

// Largest eigenpair of a Hermitian matrix through the general complex solver.
inline std::pair<double, CVector> top_eigenpair(const CMatrix &a)
{
    Eigen::ComplexEigenSolver<CMatrix> es(a);
    Eigen::Index best = 0;
    es.eigenvalues().real().maxCoeff(&best);
    CVector v = es.eigenvectors().col(best);
    v.normalize();
    return {es.eigenvalues()[best].real(), v};
}

struct Statistics
{
    double lrt = 0.0, aw = 0.0, ug = 0.0, ag = 0.0, rd = 0.0;
    std::vector<CVector> s0, s1;
    std::vector<double> lambda0, lambda1;
};

// Statistics from the L x L matrices Y W Y^H and Y W Y^H + X W X^H with
// W = diag(1 / (|x_k|^2 + |y_k|^2)) built from the raw columns.
inline Statistics dense_statistics(const std::vector<CMatrix> &xs, const std::vector<CMatrix> &ys)
{
    Statistics out;
    cplx aw = 0.0, ug = 0.0, rd = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j)
    {
        const CMatrix &x = xs[j], &y = ys[j];
        const Eigen::Index len = x.rows();
        CMatrix ref = CMatrix::Zero(len, len), sur = CMatrix::Zero(len, len);
        std::vector<double> w(std::size_t(x.cols()));
        for (Eigen::Index k = 0; k < x.cols(); ++k)
        {
            double total = 0.0;
            for (Eigen::Index n = 0; n < len; ++n)
                total += std::norm(x(n, k)) + std::norm(y(n, k));
            w[std::size_t(k)] = 1.0 / total;
            ref += w[std::size_t(k)] * y.col(k) * y.col(k).adjoint();
            sur += w[std::size_t(k)] * x.col(k) * x.col(k).adjoint();
        }
        auto [l0, s0] = top_eigenpair(ref);
        auto [l1, s1] = top_eigenpair(ref + sur);
        Eigen::Index peak = 0;
        s0.cwiseAbs().maxCoeff(&peak);
        s0 *= std::abs(s0[peak]) / s0[peak];
        const cplx c = (s1.adjoint() * s0)(0, 0);
        s1 *= c / std::abs(c);
        out.lrt += l1 - l0;
        for (Eigen::Index k = 0; k < x.cols(); ++k)
        {
            const double wk = w[std::size_t(k)];
            const CMatrix num = wk * x.col(k) * x.col(k).adjoint();
            const CMatrix den = CMatrix::Identity(len, len) - wk * y.col(k) * y.col(k).adjoint();
            const cplx d = (s0.adjoint() * den * s0)(0, 0);
            rd += (s0.adjoint() * num * s0)(0, 0) / d;
            aw += (s1.adjoint() * num * s1)(0, 0) / d;
            ug += (s1.adjoint() * num * s0)(0, 0) / d;
        }
        out.s0.push_back(s0);
        out.s1.push_back(s1);
        out.lambda0.push_back(l0);
        out.lambda1.push_back(l1);
    }
    out.rd = rd.real();
    out.aw = aw.real();
    out.ug = 2.0 * ug.real();
    out.ag = 2.0 * std::abs(ug);
    return out;
}

inline double rel(double a, double b)
{
    if (a == b)
        return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

struct FimCheck
{
    RMatrix model;             // ||s||^2 diag(1 / sigma^2)
    CMatrix estimate;          // mean of score_alpha score_alpha^H
    double worst_diag = 0.0;   // relative error of diagonal entries
    double worst_off = 0.0;    // |off-diagonal| / sqrt(J_kk J_ll)
    double worst_zero_z = 0.0; // largest |mean| / standard error over the zero blocks
};

// Monte-Carlo score covariance for one transmitter at the true parameters.
inline FimCheck fim_monte_carlo(Eigen::Index len, Eigen::Index nr, std::size_t trials, std::uint64_t seed)
{
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector s(len);
    for (auto &e : s)
        e = std::polar(1.0, phase(g));
    RVector sigma2(nr);
    CVector alpha(nr), beta(nr);
    for (Eigen::Index k = 0; k < nr; ++k)
    {
        sigma2[k] = 0.5 + double(k);
        alpha[k] = std::polar(0.7 + 0.2 * double(k), phase(g));
        beta[k] = std::polar(1.3 - 0.1 * double(k), phase(g));
    }

    const Eigen::Index zero_entries = 3 * nr * nr + len * nr;
    CMatrix jrr = CMatrix::Zero(nr, nr);
    CVector sum = CVector::Zero(zero_entries);
    RVector sum_sq = RVector::Zero(zero_entries);
    std::vector<CVector> samples;
    samples.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t)
    {
        CVector ga(nr), gb(nr), gs = CVector::Zero(len);
        RVector gsig(nr);
        for (Eigen::Index k = 0; k < nr; ++k)
        {
            const double sd = std::sqrt(sigma2[k] / 2.0);
            CVector x(len), y(len);
            for (Eigen::Index n = 0; n < len; ++n)
            {
                x[n] = alpha[k] * s[n] + cplx(sd * normal(g), sd * normal(g));
                y[n] = beta[k] * s[n] + cplx(sd * normal(g), sd * normal(g));
            }
            const double v = sigma2[k];
            ga[k] = (s.dot(x) - alpha[k] * s.squaredNorm()) / v;
            gb[k] = (s.dot(y) - beta[k] * s.squaredNorm()) / v;
            gsig[k] = -2.0 * double(len) / v + ((x - alpha[k] * s).squaredNorm() + (y - beta[k] * s).squaredNorm()) / (v * v);
            gs += (std::conj(alpha[k]) * x + std::conj(beta[k]) * y - (std::norm(alpha[k]) + std::norm(beta[k])) * s) / v;
        }
        jrr += ga * ga.adjoint();
        CVector z(zero_entries);
        Eigen::Index idx = 0;
        for (Eigen::Index a = 0; a < nr; ++a)
            for (Eigen::Index b = 0; b < nr; ++b)
            {
                z[idx++] = ga[a] * std::conj(gb[b]);
                z[idx++] = ga[a] * gsig[b];
                z[idx++] = gb[a] * gsig[b];
            }
        for (Eigen::Index n = 0; n < len; ++n)
            for (Eigen::Index b = 0; b < nr; ++b)
                z[idx++] = gs[n] * gsig[b];
        sum += z;
        samples.push_back(std::move(z));
    }
    const double nt = double(trials);
    const CVector mean = sum / nt;
    for (const auto &z : samples)
        sum_sq += (z - mean).cwiseAbs2();

    FimCheck out;
    out.estimate = jrr / nt;
    out.model = pasrad::fim_rr_block(s, sigma2);
    for (Eigen::Index a = 0; a < nr; ++a)
        for (Eigen::Index b = 0; b < nr; ++b)
        {
            if (a == b)
                out.worst_diag = std::max(out.worst_diag, rel(out.estimate(a, a).real(), out.model(a, a)));
            else
                out.worst_off = std::max(out.worst_off, std::abs(out.estimate(a, b)) /
                                                            std::sqrt(out.model(a, a) * out.model(b, b)));
        }
    for (Eigen::Index i = 0; i < zero_entries; ++i)
    {
        const double se = std::sqrt(sum_sq[i] / nt / nt);
        out.worst_zero_z = std::max(out.worst_zero_z, std::abs(mean[i]) / se);
    }
    return out;
}

} // namespace oracle
