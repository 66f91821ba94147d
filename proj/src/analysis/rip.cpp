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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fusecs
{

namespace
{

std::vector<Index> column_set(const SensingMatrix &a, const std::optional<IndexSetProjection> &omega)
{
    if (!omega)
    {
        std::vector<Index> all(static_cast<std::size_t>(a.cols()));
        std::iota(all.begin(), all.end(), Index{0});
        return all;
    }
    if (omega->ambient_dim() != a.cols())
        throw DimensionError("RIP: projection dimension does not match the matrix");
    return omega->indices();
}

// Largest |lambda - 1| over the eigenvalues of G restricted to `local`.
double gram_deviation(const Matrix &g, const std::vector<Index> &local)
{
    const std::size_t s = local.size();
    if (s == 0)
        return 0.0;
    if (s == 1)
        return std::abs(g(local[0], local[0]) - 1.0);
    if (s == 2)
    {
        const double p = g(local[0], local[0]);
        const double r = g(local[1], local[1]);
        const double b = g(local[0], local[1]);
        const double mid = 0.5 * (p + r);
        const double rad = std::hypot(0.5 * (p - r), b);
        return std::max(mid + rad - 1.0, 1.0 - (mid - rad));
    }
    Matrix sub(static_cast<Index>(s), static_cast<Index>(s));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            sub(static_cast<Index>(i), static_cast<Index>(j)) = g(local[i], local[j]);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(sub, Eigen::EigenvaluesOnly);
    const Vector &ev = eig.eigenvalues();
    return std::max(ev[ev.size() - 1] - 1.0, 1.0 - ev[0]);
}

bool next_combination(std::vector<Index> &comb, Index n)
{
    const Index k = static_cast<Index>(comb.size());
    Index i = k - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i)
        --i;
    if (i < 0)
        return false;
    ++comb[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    return true;
}

Matrix restricted_gram(const SensingMatrix &a, const std::vector<Index> &cols)
{
    Matrix sub(a.rows(), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        sub.col(static_cast<Index>(j)) = a.entries().col(cols[j]);
    return sub.transpose() * sub;
}

RipEstimate enumerate_supports(const SensingMatrix &a, int s, const std::optional<IndexSetProjection> &omega)
{
    const auto cols = column_set(a, omega);
    const Index k = static_cast<Index>(cols.size());
    if (s < 0 || s > k)
        throw InvalidArgument("RIP: sparsity must lie in 0..|Omega|");

    RipEstimate est;
    est.s = s;
    if (omega)
        est.subspace = cols;
    if (s == 0)
        return est;

    const Matrix g = restricted_gram(a, cols);
    std::vector<Index> comb(static_cast<std::size_t>(s));
    std::iota(comb.begin(), comb.end(), Index{0});
    double best = -1.0;
    do
    {
        const double dev = gram_deviation(g, comb);
        if (dev > best)
        {
            best = dev;
            est.worst_support = comb;
        }
    } while (next_combination(comb, k));
    for (auto &j : est.worst_support)
        j = cols[static_cast<std::size_t>(j)];
    est.delta = best;
    return est;
}

} // namespace

double binomial_coefficient(Index n, Index k)
{
    if (k < 0 || k > n)
        return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (Index j = 1; j <= k; ++j)
        c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
    return std::round(c);
}

RipEstimate rip_exhaustive(const SensingMatrix &a, int s, const std::optional<IndexSetProjection> &omega)
{
    const Index k = static_cast<Index>(column_set(a, omega).size());
    const double count = binomial_coefficient(k, s);
    if (count > rip_exhaustive_cap)
        throw InvalidArgument("rip_exhaustive: " + std::to_string(static_cast<long long>(count)) +
                              " supports exceed the exhaustive cap of 1e6; use rip_montecarlo");
    return enumerate_supports(a, s, omega);
}

RipEstimate rip_montecarlo(const SensingMatrix &a, int s, const std::optional<IndexSetProjection> &omega, int trials,
                           std::uint64_t seed)
{
    if (trials < 1)
        throw InvalidArgument("rip_montecarlo: trials must be at least 1");
    const auto cols = column_set(a, omega);
    const Index k = static_cast<Index>(cols.size());
    if (s < 0 || s > k)
        throw InvalidArgument("RIP: sparsity must lie in 0..|Omega|");

    RipEstimate est;
    const double count = binomial_coefficient(k, s);
    if (static_cast<double>(trials) >= count && count <= rip_exhaustive_cap)
    {
        est = enumerate_supports(a, s, omega);
    }
    else
    {
        est.s = s;
        if (omega)
            est.subspace = cols;
        const Matrix g = restricted_gram(a, cols);
        double best = -1.0;
        for (int t = 0; t < trials; ++t)
        {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
            const auto local = sample_subset(k, s, rng);
            const double dev = gram_deviation(g, local);
            if (dev > best)
            {
                best = dev;
                est.worst_support = local;
            }
        }
        for (auto &j : est.worst_support)
            j = cols[static_cast<std::size_t>(j)];
        est.delta = std::max(best, 0.0);
    }
    est.method = RipMethod::montecarlo;
    est.trials = trials;
    est.seed = seed;
    return est;
}

PripReport prip_check(const SensingMatrix &a, const FusionFrame &frame, const SparsityPattern &pattern,
                      const std::vector<double> &delta_targets, int sandwich_trials, std::uint64_t seed,
                      int fallback_trials)
{
    if (frame.ambient_dim() != a.cols())
        throw DimensionError("prip_check: frame and matrix disagree on N");
    pattern.check_against(frame);
    const Index n = frame.size();
    if (static_cast<Index>(delta_targets.size()) != n)
        throw InvalidArgument("prip_check: one delta target per subspace expected");

    PripReport report;
    double min_lower = INFINITY, max_upper = 0.0;
    for (Index i = 0; i < n; ++i)
    {
        const auto &omega = frame.projection(i);
        const int s = pattern.per_subspace[static_cast<std::size_t>(i)];
        const RipEstimate est =
            binomial_coefficient(omega.rank(), s) <= rip_exhaustive_cap
                ? rip_exhaustive(a, s, omega)
                : rip_montecarlo(a, s, omega, fallback_trials, derive_seed(seed, static_cast<std::uint64_t>(i)));
        report.pass.push_back(est.delta <= delta_targets[static_cast<std::size_t>(i)]);
        min_lower = std::min(min_lower, 1.0 - est.delta);
        max_upper = std::max(max_upper, 1.0 + est.delta);
        report.per_subspace.push_back(est);
    }
    report.lower = frame.lower_bound() * min_lower;
    report.upper = frame.upper_bound() * max_upper;

    // Coordinate -> subspaces containing it, for sampling distributed-sparse v.
    const Index big_n = frame.ambient_dim();
    std::vector<std::vector<Index>> owners(static_cast<std::size_t>(big_n));
    for (Index i = 0; i < n; ++i)
        for (Index k : frame.projection(i).indices())
            owners[static_cast<std::size_t>(k)].push_back(i);

    const std::uint64_t sandwich_seed = derive_seed(seed, static_cast<std::uint64_t>(n) + 1);
    for (int t = 0; t < sandwich_trials; ++t)
    {
        Rng rng(derive_seed(sandwich_seed, static_cast<std::uint64_t>(t)));
        std::vector<Index> order(static_cast<std::size_t>(big_n));
        std::iota(order.begin(), order.end(), Index{0});
        std::shuffle(order.begin(), order.end(), rng);
        std::uniform_int_distribution<Index> target_dist(1, big_n);
        const Index target = target_dist(rng);

        std::vector<int> used(static_cast<std::size_t>(n), 0);
        Vector v = Vector::Zero(big_n);
        std::normal_distribution<double> normal(0.0, 1.0);
        Index placed = 0;
        for (Index k : order)
        {
            if (placed == target)
                break;
            const auto &own = owners[static_cast<std::size_t>(k)];
            const bool fits = std::all_of(own.begin(), own.end(), [&](Index i) {
                return used[static_cast<std::size_t>(i)] < pattern.per_subspace[static_cast<std::size_t>(i)];
            });
            if (!fits)
                continue;
            for (Index i : own)
                ++used[static_cast<std::size_t>(i)];
            v[k] = normal(rng);
            ++placed;
        }
        if (placed == 0)
            continue; // every s_i is zero: nothing to test

        double energy = 0.0;
        for (Index i = 0; i < n; ++i)
            energy += (a.entries() * frame.projection(i).apply(v)).squaredNorm();
        const double vv = v.squaredNorm();
        const double slack = 1e-10 * std::max(1.0, vv);
        ++report.sandwich_trials;
        if (energy < report.lower * vv - slack || energy > report.upper * vv + slack)
            ++report.sandwich_violations;
    }
    return report;
}

} // namespace fusecs
