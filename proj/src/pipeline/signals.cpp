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

#include "fusecs/frames.hpp"
#include "fusecs/pipeline.hpp"
#include "fusecs/random.hpp"

#include <cmath>
#include <numbers>

namespace fusecs
{

Matrix haar_basis(Index n, int levels)
{
    // haar_level_blocks validates n and levels.
    const auto blocks = haar_level_blocks(n, levels);
    Matrix h = Matrix::Zero(n, n);
    Index col = 0;

    const Index coarse_len = Index{1} << levels;
    const double coarse_amp = 1.0 / std::sqrt(static_cast<double>(coarse_len));
    for (Index k = 0; k < n / coarse_len; ++k, ++col)
        h.col(col).segment(k * coarse_len, coarse_len).setConstant(coarse_amp);

    for (int j = levels; j >= 1; --j)
    {
        const Index len = Index{1} << j;
        const double amp = 1.0 / std::sqrt(static_cast<double>(len));
        for (Index k = 0; k < n / len; ++k, ++col)
        {
            h.col(col).segment(k * len, len / 2).setConstant(amp);
            h.col(col).segment(k * len + len / 2, len / 2).setConstant(-amp);
        }
    }
    if (col != n || blocks.empty())
        throw Error("haar_basis: internal layout mismatch");
    return h;
}

double doppler_value(double t)
{
    return std::sqrt(t * (1.0 - t)) * std::sin(2.1 * std::numbers::pi / (t + 0.05));
}

SignalVector doppler_signal(Index n, double noise_sigma, std::uint64_t seed)
{
    if (n < 1 || (n & (n - 1)) != 0)
        throw InvalidArgument("doppler_signal: N must be a power of two");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
        throw InvalidArgument("doppler_signal: sigma must be finite and nonnegative");
    Vector x(n);
    for (Index k = 0; k < n; ++k)
        x[k] = doppler_value(static_cast<double>(k + 1) / static_cast<double>(n + 1));
    if (noise_sigma > 0.0)
    {
        Rng rng(seed);
        x += noise_sigma * gaussian_vector(n, rng);
    }
    return SignalVector(std::move(x));
}

} // namespace fusecs
