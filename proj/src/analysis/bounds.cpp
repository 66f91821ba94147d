// SPDX-License-Identifier: Apache-2.0
//
// fusecs: fused compressed sensing over fusion frames
// Copyright (C) 2026 The fusecs authors
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

#include "fusecs/analysis.hpp"
#include "fusecs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace fusecs
{

namespace
{

double lower_frame_bound(const FusionFrame &frame)
{
    if (!frame.is_valid())
        throw InvalidFrameError("error bound needs a covering family (C >= 1)", validate(frame).uncovered);
    return frame.lower_bound();
}

void check_length(std::size_t got, Index n, const char *what)
{
    if (static_cast<Index>(got) != n)
        throw InvalidArgument(std::string(what) + ": one entry per subspace expected");
}

void check_rho(const NspConstants &c)
{
    if (!(c.rho >= 0.0 && c.rho < 1.0))
        throw InvalidArgument("NSP bound: every rho must lie in [0, 1)");
}

} // namespace

std::vector<double> best_term_errors(const SignalVector &x, const FusionFrame &frame, const SparsityPattern &pattern)
{
    if (x.size() != frame.ambient_dim())
        throw DimensionError("best_term_errors: signal length does not match the frame");
    pattern.check_against(frame);
    std::vector<double> out;
    for (Index i = 0; i < frame.size(); ++i)
    {
        const Vector local = frame.projection(i).restrict(x.values()).cwiseAbs();
        std::vector<double> mags(local.data(), local.data() + local.size());
        std::sort(mags.begin(), mags.end(), std::greater<>());
        const auto keep = static_cast<std::size_t>(pattern.per_subspace[static_cast<std::size_t>(i)]);
        double tail = 0.0;
        for (std::size_t j = keep; j < mags.size(); ++j)
            tail += mags[j];
        out.push_back(tail);
    }
    return out;
}

double bound_prop2(const FusionFrame &frame, const SensingMatrix &a, const std::vector<Vector> &noise)
{
    const double c = lower_frame_bound(frame);
    check_length(noise.size(), frame.size(), "bound_prop2");
    double sum = 0.0;
    for (Index i = 0; i < frame.size(); ++i)
        sum += lsq_columns(a.columns(frame.projection(i)), noise[static_cast<std::size_t>(i)]).squaredNorm();
    return sum / c;
}

double bound_prop2(const FusionFrame &frame, const SensingMatrix &a, const std::vector<double> &noise_norms)
{
    const double c = lower_frame_bound(frame);
    check_length(noise_norms.size(), frame.size(), "bound_prop2");
    double sum = 0.0;
    for (Index i = 0; i < frame.size(); ++i)
    {
        const double eta = noise_norms[static_cast<std::size_t>(i)];
        if (eta == 0.0)
            continue;
        const double pn = pinv_norm(a.columns(frame.projection(i)));
        sum += pn * pn * eta * eta;
    }
    return sum / c;
}

double bound_rdnsp(const FusionFrame &frame, const std::vector<NspConstants> &constants,
                   const std::vector<double> &sigma, const std::vector<double> &noise_norms)
{
    const double c = lower_frame_bound(frame);
    const Index n = frame.size();
    check_length(constants.size(), n, "bound_rdnsp");
    check_length(sigma.size(), n, "bound_rdnsp");
    check_length(noise_norms.size(), n, "bound_rdnsp");
    double sum = 0.0;
    for (std::size_t i = 0; i < constants.size(); ++i)
    {
        const auto &k = constants[i];
        check_rho(k);
        sum += (1.0 + k.rho) / (1.0 - k.rho) * sigma[i] + 2.0 * k.tau / (1.0 - k.rho) * noise_norms[i];
    }
    return 2.0 / c * sum;
}

double bound_rdnsp_lp(const FusionFrame &frame, const std::vector<NspConstants> &constants,
                      const std::vector<double> &sigma, const std::vector<double> &noise_norms,
                      const SparsityPattern &pattern, double p)
{
    const double c = lower_frame_bound(frame);
    const Index n = frame.size();
    check_length(constants.size(), n, "bound_rdnsp_lp");
    check_length(sigma.size(), n, "bound_rdnsp_lp");
    check_length(noise_norms.size(), n, "bound_rdnsp_lp");
    pattern.check_against(frame);
    if (!(p >= 1.0 && p <= 2.0))
        throw InvalidArgument("bound_rdnsp_lp: p must lie in [1, 2]");
    double sum = 0.0;
    for (std::size_t i = 0; i < constants.size(); ++i)
    {
        const auto &k = constants[i];
        check_rho(k);
        const double s = std::max(1, pattern.per_subspace[i]);
        const double rho_vec = 2.0 * (1.0 + k.rho) * (1.0 + k.rho) / (1.0 - k.rho);
        const double tau_vec = (3.0 - k.rho) / (1.0 - k.rho) * k.tau;
        sum += rho_vec * sigma[i] / std::pow(s, 1.0 - 1.0 / p) + tau_vec * noise_norms[i] / std::pow(s, 0.5 - 1.0 / p);
    }
    return sum / c;
}

double informal_constant(double delta)
{
    if (!(delta >= 0.0) || !(delta < rip_to_nsp_threshold()))
        throw InvalidArgument("informal_constant: delta must lie in [0, 4/sqrt(41))");
    const double d = 16.0 - 41.0 * delta * delta;
    return 960.0 * std::sqrt(2.0) / (d * d);
}

double informal_bound(Index n, int lower_frame_bound, double delta, double eta)
{
    if (lower_frame_bound < 1 || n < 1)
        throw InvalidArgument("informal_bound: need n >= 1 and C >= 1");
    return static_cast<double>(n) / lower_frame_bound * informal_constant(delta) * eta;
}

double bound_constrained(const FusionFrame &frame, const SensingMatrix &a, const std::vector<SolverKind> &kinds,
                         const std::vector<Vector> &noise, const std::vector<NspConstants> &constants,
                         const std::vector<double> &sigma)
{
    const double c = lower_frame_bound(frame);
    const Index n = frame.size();
    check_length(kinds.size(), n, "bound_constrained");
    check_length(noise.size(), n, "bound_constrained");
    check_length(constants.size(), n, "bound_constrained");
    check_length(sigma.size(), n, "bound_constrained");
    double sum = 0.0;
    for (std::size_t i = 0; i < kinds.size(); ++i)
    {
        if (kinds[i] == SolverKind::lsq)
        {
            sum += lsq_columns(a.columns(frame.projection(static_cast<Index>(i))), noise[i]).norm();
            continue;
        }
        const auto &k = constants[i];
        check_rho(k);
        sum += 2.0 * (1.0 + k.rho) / (1.0 - k.rho) * sigma[i] + 4.0 * k.tau / (1.0 - k.rho) * noise[i].norm();
    }
    return sum / c;
}

} // namespace fusecs
