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

#include "fusecs/random.hpp"

#include <algorithm>
#include <numeric>

namespace fusecs
{

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
    return mix64(base ^ mix64(index + 1));
}

Vector gaussian_vector(Index n, Rng &rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (Index k = 0; k < n; ++k)
        v[k] = normal(rng);
    return v;
}

std::vector<Index> sample_subset(Index n, Index r, Rng &rng)
{
    if (r < 0 || r > n)
        throw InvalidArgument("sample_subset: subset size out of range");
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index k = 0; k < r; ++k)
    {
        std::uniform_int_distribution<Index> pick(k, n - 1);
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    pool.resize(static_cast<std::size_t>(r));
    std::sort(pool.begin(), pool.end());
    return pool;
}

Vector sparse_gaussian_vector(Index n, Index s, Rng &rng)
{
    Vector x = Vector::Zero(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index k : sample_subset(n, s, rng))
        x[k] = normal(rng);
    return x;
}

} // namespace fusecs
