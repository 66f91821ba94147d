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

#ifndef FUSECS_PIPELINE_HPP
#define FUSECS_PIPELINE_HPP

#include "fusecs/core.hpp"
#include "fusecs/solvers.hpp"

#include <cstdint>
#include <vector>

namespace fusecs
{

// ---- Configuration -------------------------------------------------------

enum class SolverPolicy
{
    automatic,  // lsq when rank(P_i) <= m and A_{Omega_i} is well conditioned, else BPDN
    force_lsq,
    force_bpdn,
    force_l1_analysis
};

enum class FusionMode
{
    exact_diagonal,
    frame_algorithm
};

enum class ExecutionMode
{
    sequential_online,
    parallel_batch
};

struct PipelineConfig
{
    SolverPolicy policy = SolverPolicy::automatic;
    FusionMode fusion = FusionMode::exact_diagonal;
    int frame_k_max = 0; // 0: default cap
    double frame_tol = 1e-10;
    ExecutionMode execution = ExecutionMode::sequential_online;
    // Per-channel eta_i used by the l1 solvers; empty means the bounds
    // stored in the MeasurementSet.
    std::vector<double> noise_estimates;
    SolverOptions solver;
    // Fuse a non-covering family with the pseudo-inverse of S (zero on
    // uncovered coordinates) instead of failing.
    bool allow_uncovered = false;
    int jobs = 0; // parallel_batch worker count, 0: hardware concurrency
    // Smallest |R_kk| of the pivoted QR accepted by the automatic lsq branch.
    double lsq_pivot_threshold = 1e-8;
};

// Solver failure on one channel; `channel` is 0-based.
class ChannelError : public Error
{
public:
    ChannelError(Index channel, const std::string &what)
        : Error("subspace " + std::to_string(channel + 1) + ": " + what), channel_(channel) {}
    Index channel() const { return channel_; }

private:
    Index channel_;
};

// ---- Measurement synthesis -----------------------------------------------

struct NoiseSpec
{
    enum class Mode
    {
        exact_norm, // Gaussian direction rescaled to norm eta_i
        gaussian    // i.i.d. N(0, sigma^2) entries
    };
    Mode mode = Mode::exact_norm;
    std::vector<double> levels; // eta_i; a single value applies to every channel
    double sigma = 0.0;
    std::uint64_t seed = 0;

    static NoiseSpec exact(std::vector<double> levels, std::uint64_t seed) { return {Mode::exact_norm, std::move(levels), 0.0, seed}; }
    static NoiseSpec gaussian_sigma(double sigma, std::uint64_t seed) { return {Mode::gaussian, {}, sigma, seed}; }
};

struct SyntheticMeasurements
{
    MeasurementSet set;       // noise_bounds: eta_i, or the realized |e_i| in gaussian mode
    std::vector<Vector> noise; // e_i
};

// y_i = A P_i x + e_i. Channel i draws its noise from derive_seed(seed, i),
// so the noise directions do not depend on the noise level.
SyntheticMeasurements synthesize_measurements(const SignalVector &x, const SensingMatrix &a, const FusionFrame &frame,
                                              const NoiseSpec &noise);

// ---- Fused recovery ------------------------------------------------------

// Accumulates local estimates one channel at a time and fuses on demand,
// without keeping measurements around.
class OnlineFusion
{
public:
    explicit OnlineFusion(const FusionFrame &frame);
    void add(Index channel, const SignalVector &local_estimate);
    Index received() const { return received_; }
    // S^{-1} of the running sum.
    SignalVector fuse(const PipelineConfig &cfg, int *iterations = nullptr) const;

private:
    const FusionFrame &frame_;
    Vector sum_;
    Index received_ = 0;
};

// Local estimate for channel i under the configured policy.
struct LocalSolve
{
    SignalVector estimate = SignalVector::zeros(1);
    SolverKind kind = SolverKind::lsq;
    int iterations = 0;
    bool converged = true;
};
LocalSolve solve_channel(const SensingMatrix &a, const IndexSetProjection &omega, const Vector &y, double eta,
                         const PipelineConfig &cfg);

// x_hat = S^{-1} sum_i x_hat_i. Both execution modes sum in channel order,
// so they return identical estimates.
RecoveryReport fused_recover(const SensingMatrix &a, const FusionFrame &frame, const MeasurementSet &ys,
                             const PipelineConfig &cfg);

// ---- Local dictionaries (general subspaces) ------------------------------

// Orthogonal projection onto span(basis), basis with orthonormal columns.
class SubspaceProjector
{
public:
    static SubspaceProjector from_index_set(const IndexSetProjection &omega);
    // Orthonormalizes the columns of `span` (rank decided at tol * largest
    // singular value).
    static SubspaceProjector from_span(const Matrix &span, double tol = 1e-10);

    Index ambient_dim() const { return basis_.rows(); }
    Index rank() const { return basis_.cols(); }
    const Matrix &basis() const { return basis_; }
    Vector apply(const Vector &v) const;

private:
    explicit SubspaceProjector(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

struct LocalDictionary
{
    Index subspace = 0;
    Matrix matrix;              // [d_k (k in Omega) | P d_j (j in Gamma)]
    std::vector<Index> omega;   // columns inside W_i, kept as they are
    std::vector<Index> gamma;   // columns moved by P_i, kept as P_i d_j
    std::vector<Index> lambda;  // columns in ker P_i, dropped
};

LocalDictionary build_local_dictionary(const Matrix &dict, const SubspaceProjector &p, Index subspace = 0,
                                       double tol_kernel = 1e-10);

// Fusion frame of arbitrary subspaces: S = sum_i P_i as an explicit matrix.
class GeneralFusionFrame
{
public:
    explicit GeneralFusionFrame(std::vector<SubspaceProjector> projectors);
    Index ambient_dim() const { return operator_.rows(); }
    Index size() const { return static_cast<Index>(projectors_.size()); }
    const SubspaceProjector &projector(Index i) const { return projectors_.at(static_cast<std::size_t>(i)); }
    const Matrix &fusion_operator() const { return operator_; }
    double lower_bound() const { return lower_; }
    double upper_bound() const { return upper_; }
    bool is_identity() const { return identity_; }
    Vector invert(const Vector &v) const;

private:
    std::vector<SubspaceProjector> projectors_;
    Matrix operator_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    bool identity_ = false;
};

enum class DictionaryMethod
{
    analysis,
    synthesis
};

// f_i from l1-analysis on D_i (or synthesis: f_i = D_i bpdn(A D_i)), fused
// with S^{-1}. ys.measurements[i] = A P_i f + e_i.
RecoveryReport dict_fused_recover(const SensingMatrix &a, const Matrix &dict, const GeneralFusionFrame &frame,
                                  const MeasurementSet &ys, DictionaryMethod method, const SolverOptions &opts = {});

// ---- Test signals --------------------------------------------------------

// Orthonormal Haar synthesis matrix of depth `levels` on N = 2^J points. Its
// column blocks follow haar_level_blocks: N/2^levels scaling functions, then
// detail functions from the coarsest level to the finest.
Matrix haar_basis(Index n, int levels);

// sqrt(t (1 - t)) sin(2.1 pi / (t + 0.05)).
double doppler_value(double t);

// Doppler samples at t_k = (k + 1)/(N + 1), k = 0..N-1, plus i.i.d. N(0,
// sigma^2) noise from `seed`. N must be a power of two.
SignalVector doppler_signal(Index n, double noise_sigma, std::uint64_t seed);

} // namespace fusecs

#endif
