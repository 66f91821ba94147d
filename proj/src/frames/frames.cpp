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
#include "fusecs/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace fusecs
{

namespace
{

bool is_power_of_two(Index n)
{
    return n >= 1 && (n & (n - 1)) == 0;
}

int log2_exact(Index n)
{
    int j = 0;
    while ((Index{1} << j) < n)
        ++j;
    return j;
}

void check_signal(const FusionFrame &frame, const SignalVector &v, const char *where)
{
    if (v.size() != frame.ambient_dim())
        throw DimensionError(std::string(where) + ": vector length does not match the frame dimension");
}

std::string join(const std::vector<Index> &values)
{
    std::ostringstream out;
    for (std::size_t k = 0; k < values.size(); ++k)
        out << (k ? "," : "") << values[k];
    return out.str();
}

} // namespace

// ---- ProjectionFamilySpec -----------------------------------------------

ProjectionFamilySpec ProjectionFamilySpec::partition(Index n, std::vector<Index> sizes)
{
    ProjectionFamilySpec spec;
    spec.kind = Kind::partition;
    spec.ambient_dim = n;
    spec.sizes = std::move(sizes);
    return spec;
}

ProjectionFamilySpec ProjectionFamilySpec::random_fixed_rank(Index n, Index r, Index count, std::uint64_t seed)
{
    ProjectionFamilySpec spec;
    spec.kind = Kind::random_fixed_rank;
    spec.ambient_dim = n;
    spec.rank = r;
    spec.count = count;
    spec.seed = seed;
    return spec;
}

ProjectionFamilySpec ProjectionFamilySpec::singletons(Index n)
{
    ProjectionFamilySpec spec;
    spec.kind = Kind::singletons;
    spec.ambient_dim = n;
    return spec;
}

ProjectionFamilySpec ProjectionFamilySpec::haar_levels(Index n, int levels)
{
    ProjectionFamilySpec spec;
    spec.kind = Kind::haar_levels;
    spec.ambient_dim = n;
    spec.levels = levels;
    return spec;
}

void ProjectionFamilySpec::validate() const
{
    if (ambient_dim < 1)
        throw InvalidArgument("projection family: N must be at least 1");
    switch (kind)
    {
    case Kind::partition:
    {
        if (sizes.empty())
            throw InvalidArgument("partition family: empty size list");
        Index total = 0;
        for (Index s : sizes)
        {
            if (s < 1)
                throw InvalidArgument("partition family: block sizes must be positive");
            total += s;
        }
        if (total != ambient_dim)
            throw InvalidArgument("partition family: block sizes sum to " + std::to_string(total) + ", expected N = " +
                                  std::to_string(ambient_dim));
        break;
    }
    case Kind::random_fixed_rank:
        if (rank < 1 || rank > ambient_dim)
            throw InvalidArgument("random family: need 1 <= r <= N");
        if (count < 1)
            throw InvalidArgument("random family: need n >= 1");
        break;
    case Kind::singletons:
        break;
    case Kind::haar_levels:
        if (!is_power_of_two(ambient_dim))
            throw InvalidArgument("haar family: N must be a power of two");
        if (levels < 0 || levels > log2_exact(ambient_dim))
            throw InvalidArgument("haar family: depth must lie in 0..log2(N)");
        break;
    }
}

std::string ProjectionFamilySpec::to_config() const
{
    std::ostringstream out;
    out << "N = " << ambient_dim << '\n';
    switch (kind)
    {
    case Kind::partition:
        out << "family = partition\nfamily_sizes = " << join(sizes) << '\n';
        break;
    case Kind::random_fixed_rank:
        out << "family = random_fixed_rank\nr = " << rank << "\nn = " << count << "\nfamily_seed = " << seed << '\n';
        break;
    case Kind::singletons:
        out << "family = singletons\n";
        break;
    case Kind::haar_levels:
        out << "family = haar_levels\nhaar_levels = " << levels << '\n';
        break;
    }
    return out.str();
}

std::vector<std::vector<Index>> haar_level_blocks(Index n, int levels)
{
    ProjectionFamilySpec::haar_levels(n, levels).validate();
    std::vector<std::vector<Index>> blocks;
    Index start = 0;
    Index width = n >> levels;
    auto push = [&](Index len) {
        std::vector<Index> block(static_cast<std::size_t>(len));
        std::iota(block.begin(), block.end(), start);
        blocks.push_back(std::move(block));
        start += len;
    };
    push(width); // scaling coefficients
    for (int j = levels; j >= 1; --j)
    {
        push(width);
        width *= 2;
    }
    return blocks;
}

FusionFrame build_family(const ProjectionFamilySpec &spec)
{
    spec.validate();
    const Index n = spec.ambient_dim;
    std::vector<IndexSetProjection> sets;
    switch (spec.kind)
    {
    case ProjectionFamilySpec::Kind::partition:
    {
        Index start = 0;
        for (Index len : spec.sizes)
        {
            std::vector<Index> block(static_cast<std::size_t>(len));
            std::iota(block.begin(), block.end(), start);
            sets.emplace_back(n, std::move(block));
            start += len;
        }
        break;
    }
    case ProjectionFamilySpec::Kind::random_fixed_rank:
        // One derived stream per set: the first k sets of a family do not
        // depend on how many sets are requested.
        for (Index i = 0; i < spec.count; ++i)
        {
            Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
            sets.emplace_back(n, sample_subset(n, spec.rank, rng));
        }
        break;
    case ProjectionFamilySpec::Kind::singletons:
        for (Index k = 0; k < n; ++k)
            sets.emplace_back(n, std::vector<Index>{k});
        break;
    case ProjectionFamilySpec::Kind::haar_levels:
        for (auto &block : haar_level_blocks(n, spec.levels))
            sets.emplace_back(n, std::move(block));
        break;
    }
    return FusionFrame(n, std::move(sets));
}

// ---- Coverage ------------------------------------------------------------

double uncovered_probability_bound(Index n_dim, Index r, Index count)
{
    if (n_dim < 1 || r < 1 || r > n_dim)
        throw InvalidArgument("uncovered_probability_bound: need 1 <= r <= N");
    if (count < 1)
        throw InvalidArgument("uncovered_probability_bound: need n >= 1");
    const double nd = static_cast<double>(n_dim);
    return nd * std::pow((nd - static_cast<double>(r)) / nd, static_cast<double>(count));
}

int min_projection_count(Index n_dim, Index r, double eps)
{
    if (n_dim < 1 || r < 1)
        throw InvalidArgument("min_projection_count: need N >= 1 and r >= 1");
    if (!(eps > 0.0 && eps < 1.0))
        throw InvalidArgument("min_projection_count: eps must lie in (0, 1)");
    if (r >= n_dim)
        return 1;

    const double nd = static_cast<double>(n_dim);
    const double estimate = std::log(nd / eps) / std::log(nd / (nd - static_cast<double>(r)));
    // The closed form can land one off when the ratio is an exact integer;
    // settle it against the bound itself with a relative slack of 1e-12.
    const double target = eps * (1.0 + 1e-12);
    int n = std::max(1, static_cast<int>(std::ceil(estimate)));
    while (n > 1 && uncovered_probability_bound(n_dim, r, n - 1) <= target)
        --n;
    while (uncovered_probability_bound(n_dim, r, n) > target)
        ++n;
    return n;
}

double coverage_failure_frequency(Index n_dim, Index r, Index count, int trials, std::uint64_t seed)
{
    if (trials < 1)
        throw InvalidArgument("coverage_failure_frequency: trials must be at least 1");
    ProjectionFamilySpec::random_fixed_rank(n_dim, r, count, seed).validate();
    // Same draws as build_family(random_fixed_rank), without materializing
    // the frame; a trial stops early once every coordinate is covered.
    const auto n = static_cast<std::size_t>(n_dim);
    std::vector<Index> pool(n);
    std::vector<char> covered(n);
    int failures = 0;
    for (int t = 0; t < trials; ++t)
    {
        const std::uint64_t family_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
        std::fill(covered.begin(), covered.end(), 0);
        std::size_t remaining = n;
        for (Index i = 0; i < count && remaining > 0; ++i)
        {
            Rng rng(derive_seed(family_seed, static_cast<std::uint64_t>(i)));
            std::iota(pool.begin(), pool.end(), Index{0});
            for (Index k = 0; k < r; ++k)
            {
                std::uniform_int_distribution<Index> pick(k, n_dim - 1);
                std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick(rng))]);
                auto &c = covered[static_cast<std::size_t>(pool[static_cast<std::size_t>(k)])];
                if (!c)
                {
                    c = 1;
                    --remaining;
                }
            }
        }
        if (remaining > 0)
            ++failures;
    }
    return static_cast<double>(failures) / trials;
}

// ---- Fusion operator -----------------------------------------------------

SignalVector apply_fusion_operator(const FusionFrame &frame, const SignalVector &v)
{
    check_signal(frame, v, "apply_fusion_operator");
    Vector out = v.values();
    const auto &mult = frame.multiplicities();
    for (Index k = 0; k < out.size(); ++k)
        out[k] *= mult[static_cast<std::size_t>(k)];
    return SignalVector(std::move(out));
}

SignalVector invert_fusion_exact(const FusionFrame &frame, const SignalVector &v)
{
    check_signal(frame, v, "invert_fusion_exact");
    const auto report = validate(frame);
    if (!report.valid)
    {
        std::ostringstream msg;
        msg << "fusion operator is singular: " << report.uncovered.size() << " uncovered coordinate(s), first "
            << report.uncovered.front() + 1;
        throw InvalidFrameError(msg.str(), report.uncovered);
    }
    return invert_fusion_pseudo(frame, v);
}

SignalVector invert_fusion_pseudo(const FusionFrame &frame, const SignalVector &v)
{
    check_signal(frame, v, "invert_fusion_pseudo");
    Vector out = v.values();
    const auto &mult = frame.multiplicities();
    for (Index k = 0; k < out.size(); ++k)
    {
        const int m = mult[static_cast<std::size_t>(k)];
        out[k] = m > 0 ? out[k] / m : 0.0;
    }
    return SignalVector(std::move(out));
}

int default_frame_iterations(double ratio, double tol)
{
    if (!(tol > 0.0 && tol < 1.0))
        throw InvalidArgument("frame algorithm: tol must lie in (0, 1)");
    if (!(ratio >= 0.0 && ratio < 1.0))
        throw InvalidArgument("frame algorithm: contraction ratio must lie in [0, 1)");
    constexpr double cap = 1e5;
    if (ratio == 0.0)
        return 1;
    const double k = 10.0 * std::ceil(std::log(tol) / std::log(ratio));
    return static_cast<int>(std::clamp(k, 1.0, cap));
}

FrameAlgorithmResult frame_iteration(const std::function<Vector(const Vector &)> &apply_s, double lower, double upper,
                                     const Vector &sx, int k_max, double tol, const IterateObserver &observer)
{
    if (!(lower > 0.0 && upper >= lower))
        throw InvalidArgument("frame algorithm: need 0 < C <= D");
    if (k_max < 1)
        throw InvalidArgument("frame algorithm: k_max must be at least 1");
    if (!(tol > 0.0))
        throw InvalidArgument("frame algorithm: tol must be positive");

    const double step = 2.0 / (lower + upper);
    FrameAlgorithmResult result;
    result.ratio = (upper - lower) / (upper + lower);

    Vector x = Vector::Zero(sx.size());
    Vector residual = sx; // Sx - S x_0
    int k = 0;
    for (;;)
    {
        const double update = step * residual.norm();
        if (update == 0.0 || (k > 0 && update <= tol * x.norm()))
        {
            result.converged = true;
            break;
        }
        if (k == k_max)
            break;
        x += step * residual;
        ++k;
        if (observer)
            observer(k, x);
        residual = sx - apply_s(x);
    }
    result.iterations = k;
    result.estimate = SignalVector(std::move(x));
    return result;
}

FrameAlgorithmResult frame_algorithm(const FusionFrame &frame, const SignalVector &sx, int k_max, double tol,
                                     const IterateObserver &observer)
{
    check_signal(frame, sx, "frame_algorithm");
    const auto report = validate(frame);
    if (!report.valid)
        throw InvalidFrameError("frame algorithm needs a covering family (C >= 1)", report.uncovered);
    const double c = frame.lower_bound();
    const double d = frame.upper_bound();
    if (k_max <= 0)
        k_max = default_frame_iterations((d - c) / (d + c), tol);

    Vector mult(frame.ambient_dim());
    for (Index k = 0; k < mult.size(); ++k)
        mult[k] = frame.multiplicities()[static_cast<std::size_t>(k)];
    auto apply_s = [&mult](const Vector &v) -> Vector { return mult.cwiseProduct(v); };
    return frame_iteration(apply_s, c, d, sx.values(), k_max, tol, observer);
}

// ---- Lower frame bound statistics ---------------------------------------

double binomial_cdf(int l, int n, double p)
{
    if (n < 0 || !(p >= 0.0 && p <= 1.0))
        throw InvalidArgument("binomial_cdf: need n >= 0 and p in [0, 1]");
    if (l < 0)
        return 0.0;
    if (l >= n)
        return 1.0;
    if (p == 0.0)
        return 1.0;
    if (p == 1.0)
        return 0.0;
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    double sum = 0.0;
    for (int j = 0; j <= l; ++j)
    {
        const double log_choose = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
        sum += std::exp(log_choose + j * log_p + (n - j) * log_q);
    }
    return std::min(sum, 1.0);
}

double lower_bound_distribution(Index n_dim, Index r, int count, int l)
{
    if (n_dim < 1 || r < 0 || r > n_dim)
        throw InvalidArgument("lower_bound_distribution: need 0 <= r <= N");
    if (count < 0 || l < 0 || l > count)
        throw InvalidArgument("lower_bound_distribution: need 0 <= l <= n");
    const double p = static_cast<double>(r) / static_cast<double>(n_dim);
    return std::pow(1.0 - binomial_cdf(l - 1, count, p), static_cast<double>(n_dim));
}

std::vector<LowerBoundStats> expected_lower_bound_montecarlo(Index n_dim, Index r, const std::vector<int> &counts,
                                                             int trials, std::uint64_t seed)
{
    if (trials < 1)
        throw InvalidArgument("expected_lower_bound_montecarlo: trials must be at least 1");
    if (n_dim < 1 || r < 1 || r > n_dim)
        throw InvalidArgument("expected_lower_bound_montecarlo: need 1 <= r <= N");
    if (counts.empty())
        return {};
    for (int c : counts)
        if (c < 1)
            throw InvalidArgument("expected_lower_bound_montecarlo: every n must be at least 1");
    const int n_max = *std::max_element(counts.begin(), counts.end());

    std::vector<double> sum(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<double> sum_sq(sum.size(), 0.0);
    std::vector<int> mult(static_cast<std::size_t>(n_dim));
    for (int t = 0; t < trials; ++t)
    {
        const auto family = build_family(
            ProjectionFamilySpec::random_fixed_rank(n_dim, r, n_max, derive_seed(seed, static_cast<std::uint64_t>(t))));
        std::fill(mult.begin(), mult.end(), 0);
        for (int i = 1; i <= n_max; ++i)
        {
            for (Index k : family.projection(i - 1).indices())
                ++mult[static_cast<std::size_t>(k)];
            const double c = *std::min_element(mult.begin(), mult.end());
            sum[static_cast<std::size_t>(i)] += c;
            sum_sq[static_cast<std::size_t>(i)] += c * c;
        }
    }

    std::vector<LowerBoundStats> stats;
    for (int c : counts)
    {
        const double mean = sum[static_cast<std::size_t>(c)] / trials;
        const double var = std::max(0.0, sum_sq[static_cast<std::size_t>(c)] / trials - mean * mean);
        stats.push_back({c, mean, std::sqrt(var)});
    }
    return stats;
}

LinearFit fit_line(const std::vector<double> &xs, const std::vector<double> &ys)
{
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InvalidArgument("fit_line: need at least two (x, y) pairs of matching length");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
    {
        const double dx = xs[k] - mx;
        const double dy = ys[k] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw InvalidArgument("fit_line: all x values coincide");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k)
    {
        const double e = ys[k] - (fit.intercept + fit.slope * xs[k]);
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
    return fit;
}

} // namespace fusecs
