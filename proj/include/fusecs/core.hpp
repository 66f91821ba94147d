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

#ifndef FUSECS_CORE_HPP
#define FUSECS_CORE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusecs
{

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---- Errors ------------------------------------------------------------

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
};

// Raised by least-squares paths when the column-pivoted QR of a submatrix
// has smallest/largest pivot below the singularity threshold.
class SingularMatrixError : public Error
{
public:
    SingularMatrixError(const std::string &what, double condition_estimate)
        : Error(what), condition_estimate_(condition_estimate) {}
    double condition_estimate() const { return condition_estimate_; }

private:
    double condition_estimate_;
};

// Raised when the fusion operator is not invertible; carries the
// uncovered coordinates (0-based).
class InvalidFrameError : public Error
{
public:
    InvalidFrameError(const std::string &what, std::vector<Index> uncovered)
        : Error(what), uncovered_(std::move(uncovered)) {}
    const std::vector<Index> &uncovered() const { return uncovered_; }

private:
    std::vector<Index> uncovered_;
};

// ---- SignalVector --------------------------------------------------------

// Dense real signal of length N >= 1 with finite entries.
class SignalVector
{
public:
    explicit SignalVector(Vector values);
    static SignalVector zeros(Index n);

    Index size() const { return values_.size(); }
    const Vector &values() const { return values_; }
    double operator[](Index k) const { return values_[k]; }
    double norm() const { return values_.norm(); }

private:
    Vector values_;
};

// ---- SensingMatrix -------------------------------------------------------

enum class MatrixSource
{
    gaussian,
    bernoulli,
    file,
    supplied
};

struct MatrixProvenance
{
    MatrixSource source = MatrixSource::supplied;
    std::uint64_t seed = 0;
    std::string path;
};

class IndexSetProjection;

// m x N measurement matrix. `normalized` records that entries were scaled
// by 1/sqrt(m).
class SensingMatrix
{
public:
    SensingMatrix(Matrix entries, MatrixProvenance provenance = {}, bool normalized = false);

    static SensingMatrix gaussian(Index m, Index n, std::uint64_t seed, bool normalize = true);
    static SensingMatrix bernoulli(Index m, Index n, std::uint64_t seed, bool normalize = true);
    static SensingMatrix from_file(const std::string &path, bool normalize = false);

    Index rows() const { return entries_.rows(); }
    Index cols() const { return entries_.cols(); }
    const Matrix &entries() const { return entries_; }
    const MatrixProvenance &provenance() const { return provenance_; }
    bool normalized() const { return normalized_; }

    // A_Omega: the columns selected by the projection (m x |Omega|).
    Matrix columns(const IndexSetProjection &omega) const;
    // A P: m x N with the columns outside Omega zeroed.
    Matrix masked(const IndexSetProjection &omega) const;

private:
    Matrix entries_;
    MatrixProvenance provenance_;
    bool normalized_;
};

// ---- IndexSetProjection --------------------------------------------------

// Orthogonal coordinate projection onto span{e_k : k in Omega}. Indices are
// 0-based internally; files and user-facing reports use 1-based indices.
class IndexSetProjection
{
public:
    IndexSetProjection(Index ambient_dim, std::vector<Index> indices);
    static IndexSetProjection from_one_based(Index ambient_dim, const std::vector<Index> &indices);
    static IndexSetProjection full(Index ambient_dim);

    Index ambient_dim() const { return ambient_dim_; }
    Index rank() const { return static_cast<Index>(indices_.size()); }
    const std::vector<Index> &indices() const { return indices_; }
    bool contains(Index k) const;

    Vector apply(const Vector &v) const;
    SignalVector apply(const SignalVector &v) const { return SignalVector(apply(v.values())); }
    // v restricted to Omega (length |Omega|).
    Vector restrict(const Vector &v) const;
    // Inverse of restrict: length-N vector carrying z on Omega.
    Vector embed(const Vector &z) const;

private:
    Index ambient_dim_;
    std::vector<Index> indices_;
};

// ---- FusionFrame ---------------------------------------------------------

class FusionFrame
{
public:
    FusionFrame(Index ambient_dim, std::vector<IndexSetProjection> projections);

    Index ambient_dim() const { return ambient_dim_; }
    Index size() const { return static_cast<Index>(projections_.size()); }
    const std::vector<IndexSetProjection> &projections() const { return projections_; }
    const IndexSetProjection &projection(Index i) const { return projections_.at(static_cast<std::size_t>(i)); }

    // M(k) = |{i : k in Omega_i}|.
    const std::vector<int> &multiplicities() const { return multiplicities_; }
    int lower_bound() const { return lower_; }
    int upper_bound() const { return upper_; }
    bool is_valid() const { return lower_ >= 1; }

private:
    Index ambient_dim_;
    std::vector<IndexSetProjection> projections_;
    std::vector<int> multiplicities_;
    int lower_ = 0;
    int upper_ = 0;
};

struct CoverageReport
{
    bool valid = false;
    std::vector<Index> uncovered; // 0-based
};

// Never throws: lists the coordinates with multiplicity zero.
CoverageReport validate(const FusionFrame &frame);

// ---- SparsityPattern -----------------------------------------------------

struct SparsityPattern
{
    std::vector<int> per_subspace;

    int total() const;
    // Throws InvalidArgument when the length or any s_i > rank(P_i) is off.
    void check_against(const FusionFrame &frame) const;
    static SparsityPattern uniform(Index n, int s_i) { return {std::vector<int>(static_cast<std::size_t>(n), s_i)}; }
};

// ---- MeasurementSet ------------------------------------------------------

struct MeasurementSet
{
    std::vector<Vector> measurements; // y^(i), each of length m
    std::vector<double> noise_bounds; // eta_i

    Index size() const { return static_cast<Index>(measurements.size()); }
    void check(Index m, Index n) const;
};

// ---- RecoveryReport ------------------------------------------------------

enum class SolverKind
{
    lsq,
    bpdn,
    l1_analysis,
    l1_synthesis
};

std::string to_string(SolverKind kind);

struct RecoveryReport
{
    std::vector<SignalVector> local_estimates;
    SignalVector fused_estimate = SignalVector::zeros(1);
    std::vector<double> residuals;
    std::vector<SolverKind> solver_used;
    std::vector<int> iterations;
    std::vector<bool> converged;
    int fusion_iterations = 0;
    std::optional<double> theoretical_bound;
    std::optional<double> achieved_error;

    bool all_converged() const;
};

} // namespace fusecs

#endif
