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

#ifndef FUSECS_RANDOM_HPP
#define FUSECS_RANDOM_HPP

#include "fusecs/core.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fusecs
{

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed-splitting rule used everywhere a stream is derived from a parent
// seed: derive_seed(base, i) = mix64(base XOR mix64(i + 1)). Distinct
// indices give decorrelated streams, and the result depends only on
// (base, i), so serial and concurrent runs draw identical numbers.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

Vector gaussian_vector(Index n, Rng &rng);

// Uniform r-subset of {0..n-1} via a partial Fisher-Yates shuffle,
// returned sorted.
std::vector<Index> sample_subset(Index n, Index r, Rng &rng);

// Random s-sparse vector: uniform support, i.i.d. standard normal values.
Vector sparse_gaussian_vector(Index n, Index s, Rng &rng);

} // namespace fusecs

#endif
