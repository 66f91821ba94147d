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

#include "fusecs/solvers.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numeric>

namespace fusecs
{

namespace
{

constexpr Index max_dimension = 20;
constexpr int max_sparsity = 4;

// Advances `comb` (sorted, values in 0..n-1) to the next combination in
// lexicographic order; false once exhausted.
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

} // namespace

SignalVector l0_oracle(const SensingMatrix &a, const Vector &y, double eta, int s_max)
{
    const Index n = a.cols();
    if (n > max_dimension)
        throw InvalidArgument("l0_oracle: N = " + std::to_string(n) + " exceeds the exhaustive-search cap of 20");
    if (s_max < 0 || s_max > max_sparsity)
        throw InvalidArgument("l0_oracle: s_max must lie in 0..4");
    if (y.size() != a.rows())
        throw DimensionError("l0_oracle: measurement length does not match the matrix");
    if (!(eta >= 0.0))
        throw InvalidArgument("l0_oracle: eta must be nonnegative");

    const double limit = eta + 1e-10 * std::max(1.0, y.norm());
    if (y.norm() <= limit)
        return SignalVector::zeros(n);

    const Matrix &entries = a.entries();
    for (int s = 1; s <= std::min<Index>(s_max, n); ++s)
    {
        std::vector<Index> comb(static_cast<std::size_t>(s));
        std::iota(comb.begin(), comb.end(), Index{0});
        bool found = false;
        double best_residual = 0.0;
        Vector best;
        do
        {
            Matrix sub(a.rows(), s);
            for (int j = 0; j < s; ++j)
                sub.col(j) = entries.col(comb[static_cast<std::size_t>(j)]);
            Eigen::ColPivHouseholderQR<Matrix> qr(sub);
            qr.setThreshold(1e-10);
            if (qr.rank() < s)
                continue;
            const Vector coef = qr.solve(y);
            const double residual = (sub * coef - y).norm();
            // Strict comparison keeps the lexicographically first support on ties.
            if (residual <= limit && (!found || residual < best_residual))
            {
                found = true;
                best_residual = residual;
                best = Vector::Zero(n);
                for (int j = 0; j < s; ++j)
                    best[comb[static_cast<std::size_t>(j)]] = coef[j];
            }
        } while (next_combination(comb, n));
        if (found)
            return SignalVector(std::move(best));
    }
    throw Error("l0_oracle: no support of size <= " + std::to_string(s_max) + " satisfies the residual bound");
}

} // namespace fusecs
