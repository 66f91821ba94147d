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

#ifndef FUSECS_FRAMES_HPP
#define FUSECS_FRAMES_HPP

#include "fusecs/core.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fusecs
{

// ---- Projection families -------------------------------------------------

struct ProjectionFamilySpec
{
    enum class Kind
    {
        partition,
        random_fixed_rank,
        singletons,
        haar_levels
    };

    Kind kind = Kind::singletons;
    Index ambient_dim = 0;
    std::vector<Index> sizes; // partition
    Index rank = 0;           // random_fixed_rank
    Index count = 0;          // random_fixed_rank
    std::uint64_t seed = 0;   // random_fixed_rank
    int levels = 0;           // haar_levels: decomposition depth

    static ProjectionFamilySpec partition(Index n, std::vector<Index> sizes);
    static ProjectionFamilySpec random_fixed_rank(Index n, Index r, Index count, std::uint64_t seed);
    static ProjectionFamilySpec singletons(Index n);
    static ProjectionFamilySpec haar_levels(Index n, int levels);

    void validate() const;
    // `key = value` lines understood by the experiment config reader.
    std::string to_config() const;
};

// Coefficient-index blocks of an orthonormal Haar transform of depth
// `levels` on N = 2^J points (levels <= J): the coarse block of N/2^levels
// scaling coefficients first, then detail blocks from coarsest to finest.
std::vector<std::vector<Index>> haar_level_blocks(Index n, int levels);

FusionFrame build_family(const ProjectionFamilySpec &spec);

// ---- Coverage ------------------------------------------------------------

// N ((N - r)/N)^n: union-style bound on P[some index is uncovered].
double uncovered_probability_bound(Index n_dim, Index r, Index count);

// Smallest n with uncovered_probability_bound(N, r, n) <= eps, i.e. the
// ceiling of log(N/eps) / log(N/(N-r)). Returns 1 when r >= N.
int min_projection_count(Index n_dim, Index r, double eps);

// Monte Carlo frequency of drawing a non-covering family of `count`
// uniform rank-r index sets.
double coverage_failure_frequency(Index n_dim, Index r, Index count, int trials, std::uint64_t seed);

// ---- Fusion operator -----------------------------------------------------

SignalVector apply_fusion_operator(const FusionFrame &frame, const SignalVector &v);

// Diagonal inverse v_k / M(k). Throws InvalidFrameError naming the
// uncovered coordinates when some M(k) = 0.
SignalVector invert_fusion_exact(const FusionFrame &frame, const SignalVector &v);

// Moore-Penrose inverse of the (diagonal) fusion operator: coordinates with
// M(k) = 0 map to zero. Used by the experiment harness when a random family
// misses coordinates.
SignalVector invert_fusion_pseudo(const FusionFrame &frame, const SignalVector &v);

struct FrameAlgorithmResult
{
    SignalVector estimate = SignalVector::zeros(1);
    int iterations = 0;
    double ratio = 0.0; // (D - C) / (D + C)
    bool converged = false;
};

using IterateObserver = std::function<void(int k, const Vector &x_k)>;

// Default iteration cap: 10 ceil(log(tol)/log(ratio)), capped at 1e5.
int default_frame_iterations(double ratio, double tol);

// x_k = x_{k-1} + 2/(C+D) (Sx - S x_{k-1}) from x_0 = 0, for an arbitrary
// positive operator with bounds C <= S <= D. Stops once the next update is
// below tol relative to |x_k|, or at k_max (converged = false).
FrameAlgorithmResult frame_iteration(const std::function<Vector(const Vector &)> &apply_s, double lower, double upper,
                                     const Vector &sx, int k_max, double tol, const IterateObserver &observer = {});

// Frame algorithm for a coordinate fusion frame with C, D the min/max
// multiplicities. k_max <= 0 selects default_frame_iterations.
FrameAlgorithmResult frame_algorithm(const FusionFrame &frame, const SignalVector &sx, int k_max = 0, double tol = 1e-10,
                                     const IterateObserver &observer = {});

// ---- Lower frame bound statistics ---------------------------------------

// Binomial CDF F(l; n, p) = P[X <= l].
double binomial_cdf(int l, int n, double p);

// (1 - F(l-1; n, r/N))^N, the independence-based formula for P[C >= l].
double lower_bound_distribution(Index n_dim, Index r, int count, int l);

struct LowerBoundStats
{
    int count = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

// For each n: mean and (population) standard deviation of min_k M(k) over
// `trials` independent rank-r families. Trial t draws one sequence of index
// sets from derive_seed(seed, t) and the family for n is its first n sets,
// so per-trial minima (and hence the means) are non-decreasing in n.
std::vector<LowerBoundStats> expected_lower_bound_montecarlo(Index n_dim, Index r, const std::vector<int> &counts,
                                                             int trials, std::uint64_t seed);

struct LinearFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least-squares line through (xs, ys). R^2 is 1 when ys is constant
// and exactly fitted.
LinearFit fit_line(const std::vector<double> &xs, const std::vector<double> &ys);

} // namespace fusecs

#endif
