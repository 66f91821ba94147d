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

#include "fusecs/core.hpp"
#include "fusecs/io.hpp"
#include "fusecs/random.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fusecs
{

// ---- SignalVector --------------------------------------------------------

SignalVector::SignalVector(Vector values) : values_(std::move(values))
{
    if (values_.size() < 1)
        throw DimensionError("SignalVector: length must be at least 1");
    if (!values_.allFinite())
        throw InvalidArgument("SignalVector: entries must be finite");
}

SignalVector SignalVector::zeros(Index n)
{
    return SignalVector(Vector::Zero(n));
}

// ---- SensingMatrix -------------------------------------------------------

SensingMatrix::SensingMatrix(Matrix entries, MatrixProvenance provenance, bool normalized)
    : entries_(std::move(entries)), provenance_(std::move(provenance)), normalized_(normalized)
{
    if (entries_.rows() < 1 || entries_.cols() < 1)
        throw DimensionError("SensingMatrix: need m >= 1 and N >= 1");
    if (!entries_.allFinite())
        throw InvalidArgument("SensingMatrix: entries must be finite");

    // Normalized Gaussian columns have E||a_i||_2 close to 1.
    if (provenance_.source == MatrixSource::gaussian && normalized_ && entries_.cols() >= 50)
    {
        const double mean_norm = entries_.colwise().norm().mean();
        if (std::abs(mean_norm - 1.0) > 0.2)
        {
            std::ostringstream msg;
            msg << "SensingMatrix: mean column norm " << mean_norm << " of a normalized Gaussian matrix is off by more than 20%";
            throw InvalidArgument(msg.str());
        }
    }
}

SensingMatrix SensingMatrix::gaussian(Index m, Index n, std::uint64_t seed, bool normalize)
{
    if (m < 1 || n < 1)
        throw DimensionError("SensingMatrix::gaussian: need m >= 1 and N >= 1");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(m, n);
    // Column-major fill keeps the stream layout independent of Eigen's storage.
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i)
            a(i, j) = normal(rng);
    if (normalize)
        a /= std::sqrt(static_cast<double>(m));
    return SensingMatrix(std::move(a), {MatrixSource::gaussian, seed, {}}, normalize);
}

SensingMatrix SensingMatrix::bernoulli(Index m, Index n, std::uint64_t seed, bool normalize)
{
    if (m < 1 || n < 1)
        throw DimensionError("SensingMatrix::bernoulli: need m >= 1 and N >= 1");
    Rng rng(seed);
    std::bernoulli_distribution coin(0.5);
    Matrix a(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < m; ++i)
            a(i, j) = coin(rng) ? 1.0 : -1.0;
    if (normalize)
        a /= std::sqrt(static_cast<double>(m));
    return SensingMatrix(std::move(a), {MatrixSource::bernoulli, seed, {}}, normalize);
}

SensingMatrix SensingMatrix::from_file(const std::string &path, bool normalize)
{
    Matrix a = read_matrix_csv(path);
    if (normalize)
        a /= std::sqrt(static_cast<double>(a.rows()));
    return SensingMatrix(std::move(a), {MatrixSource::file, 0, path}, normalize);
}

Matrix SensingMatrix::columns(const IndexSetProjection &omega) const
{
    if (omega.ambient_dim() != cols())
        throw DimensionError("SensingMatrix::columns: projection dimension does not match N");
    Matrix sub(rows(), omega.rank());
    Index c = 0;
    for (Index k : omega.indices())
        sub.col(c++) = entries_.col(k);
    return sub;
}

Matrix SensingMatrix::masked(const IndexSetProjection &omega) const
{
    if (omega.ambient_dim() != cols())
        throw DimensionError("SensingMatrix::masked: projection dimension does not match N");
    Matrix out = Matrix::Zero(rows(), cols());
    for (Index k : omega.indices())
        out.col(k) = entries_.col(k);
    return out;
}

// ---- IndexSetProjection --------------------------------------------------

IndexSetProjection::IndexSetProjection(Index ambient_dim, std::vector<Index> indices)
    : ambient_dim_(ambient_dim), indices_(std::move(indices))
{
    if (ambient_dim_ < 1)
        throw DimensionError("IndexSetProjection: ambient dimension must be at least 1");
    std::sort(indices_.begin(), indices_.end());
    for (std::size_t k = 0; k < indices_.size(); ++k)
    {
        if (indices_[k] < 0 || indices_[k] >= ambient_dim_)
        {
            std::ostringstream msg;
            msg << "IndexSetProjection: index " << indices_[k] + 1 << " outside 1.." << ambient_dim_;
            throw InvalidArgument(msg.str());
        }
        if (k > 0 && indices_[k] == indices_[k - 1])
        {
            std::ostringstream msg;
            msg << "IndexSetProjection: duplicate index " << indices_[k] + 1;
            throw InvalidArgument(msg.str());
        }
    }
}

IndexSetProjection IndexSetProjection::from_one_based(Index ambient_dim, const std::vector<Index> &indices)
{
    std::vector<Index> zero_based;
    zero_based.reserve(indices.size());
    for (Index k : indices)
        zero_based.push_back(k - 1);
    return IndexSetProjection(ambient_dim, std::move(zero_based));
}

IndexSetProjection IndexSetProjection::full(Index ambient_dim)
{
    std::vector<Index> all(static_cast<std::size_t>(ambient_dim));
    for (Index k = 0; k < ambient_dim; ++k)
        all[static_cast<std::size_t>(k)] = k;
    return IndexSetProjection(ambient_dim, std::move(all));
}

bool IndexSetProjection::contains(Index k) const
{
    return std::binary_search(indices_.begin(), indices_.end(), k);
}

Vector IndexSetProjection::apply(const Vector &v) const
{
    if (v.size() != ambient_dim_)
        throw DimensionError("IndexSetProjection::apply: dimension mismatch");
    Vector out = Vector::Zero(ambient_dim_);
    for (Index k : indices_)
        out[k] = v[k];
    return out;
}

Vector IndexSetProjection::restrict(const Vector &v) const
{
    if (v.size() != ambient_dim_)
        throw DimensionError("IndexSetProjection::restrict: dimension mismatch");
    Vector out(rank());
    Index c = 0;
    for (Index k : indices_)
        out[c++] = v[k];
    return out;
}

Vector IndexSetProjection::embed(const Vector &z) const
{
    if (z.size() != rank())
        throw DimensionError("IndexSetProjection::embed: expected a vector of length |Omega|");
    Vector out = Vector::Zero(ambient_dim_);
    Index c = 0;
    for (Index k : indices_)
        out[k] = z[c++];
    return out;
}

// ---- FusionFrame ---------------------------------------------------------

FusionFrame::FusionFrame(Index ambient_dim, std::vector<IndexSetProjection> projections)
    : ambient_dim_(ambient_dim), projections_(std::move(projections)),
      multiplicities_(static_cast<std::size_t>(ambient_dim), 0)
{
    if (ambient_dim_ < 1)
        throw DimensionError("FusionFrame: ambient dimension must be at least 1");
    if (projections_.empty())
        throw InvalidArgument("FusionFrame: need at least one projection");
    for (const auto &p : projections_)
    {
        if (p.ambient_dim() != ambient_dim_)
            throw DimensionError("FusionFrame: projection with a different ambient dimension");
        for (Index k : p.indices())
            ++multiplicities_[static_cast<std::size_t>(k)];
    }
    const auto [lo, hi] = std::minmax_element(multiplicities_.begin(), multiplicities_.end());
    lower_ = *lo;
    upper_ = *hi;
}

CoverageReport validate(const FusionFrame &frame)
{
    CoverageReport report;
    const auto &mult = frame.multiplicities();
    for (std::size_t k = 0; k < mult.size(); ++k)
        if (mult[k] == 0)
            report.uncovered.push_back(static_cast<Index>(k));
    report.valid = report.uncovered.empty();
    return report;
}

// ---- SparsityPattern / MeasurementSet -----------------------------------

int SparsityPattern::total() const
{
    int s = 0;
    for (int si : per_subspace)
        s += si;
    return s;
}

void SparsityPattern::check_against(const FusionFrame &frame) const
{
    if (static_cast<Index>(per_subspace.size()) != frame.size())
        throw InvalidArgument("SparsityPattern: one entry per subspace expected");
    for (std::size_t i = 0; i < per_subspace.size(); ++i)
    {
        if (per_subspace[i] < 0 || per_subspace[i] > frame.projection(static_cast<Index>(i)).rank())
        {
            std::ostringstream msg;
            msg << "SparsityPattern: s_" << i + 1 << " = " << per_subspace[i] << " exceeds rank(P_" << i + 1 << ")";
            throw InvalidArgument(msg.str());
        }
    }
}

void MeasurementSet::check(Index m, Index n) const
{
    if (size() != n || static_cast<Index>(noise_bounds.size()) != n)
        throw DimensionError("MeasurementSet: expected one measurement vector and one noise bound per subspace");
    for (const auto &y : measurements)
        if (y.size() != m)
            throw DimensionError("MeasurementSet: measurement length does not match the sensing matrix");
    for (double eta : noise_bounds)
        if (!std::isfinite(eta) || eta < 0.0)
            throw InvalidArgument("MeasurementSet: noise bounds must be finite and nonnegative");
}

// ---- RecoveryReport ------------------------------------------------------

std::string to_string(SolverKind kind)
{
    switch (kind)
    {
    case SolverKind::lsq:
        return "lsq";
    case SolverKind::bpdn:
        return "bpdn";
    case SolverKind::l1_analysis:
        return "l1_analysis";
    case SolverKind::l1_synthesis:
        return "l1_synthesis";
    }
    return "unknown";
}

bool RecoveryReport::all_converged() const
{
    return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

} // namespace fusecs
