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
#include "fusecs/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace fusecs
{

double rip_to_nsp_threshold()
{
    return 4.0 / std::sqrt(41.0);
}

NspConstants rip_to_nsp(double delta)
{
    if (!(delta >= 0.0) || !(delta < rip_to_nsp_threshold()))
        throw InvalidArgument("rip_to_nsp: delta must lie in [0, 4/sqrt(41))");
    const double denom = std::sqrt(1.0 - delta * delta) - delta / 4.0;
    NspConstants c;
    c.rho = delta / denom;
    c.tau = std::sqrt(1.0 + delta) / denom;
    return c;
}

NspConstants l1_from_l2(const NspConstants &c, int s)
{
    if (s < 1)
        throw InvalidArgument("l1_from_l2: order must be at least 1");
    NspConstants out = c;
    out.tau = c.tau * std::sqrt(static_cast<double>(s));
    out.order = s;
    return out;
}

NspViolationReport nsp_sample_check(const SensingMatrix &a, const IndexSetProjection &omega, int s, double rho,
                                    double tau, int trials, std::uint64_t seed, int q)
{
    if (omega.ambient_dim() != a.cols())
        throw DimensionError("nsp_sample_check: projection dimension does not match the matrix");
    if (trials < 1)
        throw InvalidArgument("nsp_sample_check: trials must be at least 1");
    if (q != 1 && q != 2)
        throw InvalidArgument("nsp_sample_check: q must be 1 or 2");
    if (s < 0 || !(rho >= 0.0) || !(tau >= 0.0))
        throw InvalidArgument("nsp_sample_check: need s >= 0 and nonnegative constants");

    const Index k = omega.rank();
    const Index s_eff = std::min<Index>(s, k);
    const double scale = s_eff > 0 ? std::pow(static_cast<double>(s_eff), 1.0 - 1.0 / q) : 1.0;

    NspViolationReport report;
    auto evaluate = [&](const Vector &v) {
        const Vector pv = omega.restrict(v).cwiseAbs();
        std::vector<double> mags(pv.data(), pv.data() + pv.size());
        std::sort(mags.begin(), mags.end(), std::greater<>());
        double head = 0.0, tail = 0.0;
        for (std::size_t j = 0; j < mags.size(); ++j)
        {
            if (static_cast<Index>(j) < s_eff)
                head += q == 1 ? mags[j] : mags[j] * mags[j];
            else
                tail += mags[j];
        }
        const double lhs = q == 1 ? head : std::sqrt(head);
        const double rhs = rho / scale * tail + tau * (a.entries() * v).norm();
        const double margin = lhs - rhs;
        ++report.trials;
        if (margin > report.worst_margin)
        {
            report.worst_margin = margin;
            report.worst_vector = v;
        }
        if (margin > 1e-12 * std::max(lhs, rhs))
            ++report.violations;
    };

    const int gaussian_trials = (trials + 1) / 2;
    const int adversarial_trials = trials - gaussian_trials;
    for (int t = 0; t < gaussian_trials; ++t)
    {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        evaluate(gaussian_vector(a.cols(), rng));
    }

    if (adversarial_trials == 0 || s_eff == 0)
        return report;

    // Near-null directions of A on small subsets of Omega.
    auto adversarial = [&](const std::vector<Index> &local) {
        Matrix sub(a.rows(), static_cast<Index>(local.size()));
        std::vector<Index> global(local.size());
        for (std::size_t j = 0; j < local.size(); ++j)
        {
            global[j] = omega.indices()[static_cast<std::size_t>(local[j])];
            sub.col(static_cast<Index>(j)) = a.entries().col(global[j]);
        }
        const Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeFullV);
        const Vector w = svd.matrixV().col(sub.cols() - 1);
        Vector v = Vector::Zero(a.cols());
        for (std::size_t j = 0; j < global.size(); ++j)
            v[global[j]] = w[static_cast<Index>(j)];
        evaluate(v);
    };

    int used = 0;
    if (binomial_coefficient(k, s_eff) <= adversarial_trials)
    {
        std::vector<Index> comb(static_cast<std::size_t>(s_eff));
        std::iota(comb.begin(), comb.end(), Index{0});
        for (;;)
        {
            adversarial(comb);
            ++used;
            Index i = s_eff - 1;
            while (i >= 0 && comb[static_cast<std::size_t>(i)] == k - s_eff + i)
                --i;
            if (i < 0)
                break;
            ++comb[static_cast<std::size_t>(i)];
            for (Index j = i + 1; j < s_eff; ++j)
                comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    const Index wide = std::min<Index>(k, 2 * s_eff);
    const std::uint64_t adv_seed = derive_seed(seed, static_cast<std::uint64_t>(gaussian_trials) + 1);
    for (int t = used; t < adversarial_trials; ++t)
    {
        Rng rng(derive_seed(adv_seed, static_cast<std::uint64_t>(t)));
        adversarial(sample_subset(k, wide, rng));
    }
    return report;
}

double required_measurements_real(Index n_dim, const SparsityPattern &pattern, const std::vector<double> &deltas,
                                  double eps, double c_subg)
{
    if (pattern.per_subspace.empty())
        throw InvalidArgument("required_measurements: empty sparsity pattern");
    if (deltas.empty())
        throw InvalidArgument("required_measurements: no RIP targets given");
    if (!(eps > 0.0 && eps < 1.0))
        throw InvalidArgument("required_measurements: eps must lie in (0, 1)");
    if (!(c_subg > 0.0))
        throw InvalidArgument("required_measurements: C_subg must be positive");
    const double delta = *std::min_element(deltas.begin(), deltas.end());
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidArgument("required_measurements: RIP targets must lie in (0, 1)");
    const int s = *std::max_element(pattern.per_subspace.begin(), pattern.per_subspace.end());
    if (s < 0 || s > n_dim)
        throw InvalidArgument("required_measurements: sparsities must lie in 0..N");

    const double n = static_cast<double>(pattern.per_subspace.size());
    const double sparse_term = s > 0 ? s * std::log(std::exp(1.0) * static_cast<double>(n_dim) / s) : 0.0;
    return c_subg / (delta * delta) * (sparse_term + std::log(2.0 * n / eps));
}

int required_measurements(Index n_dim, const SparsityPattern &pattern, const std::vector<double> &deltas, double eps,
                          double c_subg)
{
    return static_cast<int>(std::ceil(required_measurements_real(n_dim, pattern, deltas, eps, c_subg)));
}

} // namespace fusecs
