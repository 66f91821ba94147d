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

#ifndef FUSECS_SOLVERS_HPP
#define FUSECS_SOLVERS_HPP

#include "fusecs/core.hpp"

#include <vector>

namespace fusecs
{

struct SolverOptions
{
    int max_iter = 5000;
    double tol_abs = 1e-8;
    double tol_rel = 1e-6;
    double penalty = 1.0; // ADMM penalty parameter
    bool verbose = false;
    // Try to finish early by re-solving on a stable support and checking a
    // dual certificate (identity-analysis problems only).
    bool polish = true;
    // Keep the per-iteration fixed-point residual in SolveResult.
    bool record_history = false;

    // Throws InvalidArgument on max_iter < 1, non-positive tolerances or
    // penalty.
    void validate() const;
};

struct SolveResult
{
    Vector solution;
    int iterations = 0;
    bool converged = false;
    bool polished = false;   // finished through a certified support solve
    double residual = 0.0;   // |B solution - y|_2
    // rho (|w_k - w_{k-1}|^2 + |l_k - l_{k-1}|^2) for the splitting variables
    // w and scaled multipliers l. Non-increasing for ADMM; filled only when
    // record_history is set.
    std::vector<double> fixed_point_residuals;
};

// ---- Least squares -------------------------------------------------------

// a^T y / a^T a. Throws InvalidArgument for a zero column.
double lsq_rank1(const Vector &a, const Vector &y);

// Least-squares fit on the columns of A selected by Omega, embedded back
// into R^N. Uses a column-pivoted QR and throws SingularMatrixError when the
// smallest pivot falls below 1e-10 times the largest.
SignalVector lsq_subspace(const SensingMatrix &a, const IndexSetProjection &omega, const Vector &y);

// Same computation on an explicit m x k matrix (returns the k coefficients).
Vector lsq_columns(const Matrix &a_omega, const Vector &y);

// |M^+|_{2->2} = 1 / sigma_min(M) for a full column rank M; throws
// SingularMatrixError otherwise.
double pinv_norm(const Matrix &m);

// ---- l1 recovery ---------------------------------------------------------

// argmin |z|_1 subject to |op z - y|_2 <= eta, by ADMM.
SolveResult bpdn(const Matrix &op, const Vector &y, double eta, const SolverOptions &opts = {});

// BPDN with the operator A P_Omega (columns outside Omega zeroed). The
// solution vanishes outside Omega.
SolveResult bpdn(const SensingMatrix &a, const IndexSetProjection &omega, const Vector &y, double eta,
                 const SolverOptions &opts = {});

// Parametrization of the analysis problem over range(D): g = basis c and
// D^+ g = coeffs c, where D^+ g are the coefficients of g against the
// canonical dual frame of D's columns.
//   orthonormal columns:  basis = D, coeffs = I (flagged by `identity`)
//   full row rank:        basis = I_N (flagged by `full_space`), coeffs = D^+
//   otherwise:            basis = U_r, coeffs = V_r S_r^{-1} from a thin SVD
struct AnalysisOperator
{
    Matrix basis;
    Matrix coeffs;
    bool identity = false;
    bool full_space = false;

    static AnalysisOperator from_dictionary(const Matrix &dict, double rank_tol = 1e-10);
    Index ambient_dim() const;
};

// argmin |D^+ g|_1 subject to |A g - y|_2 <= eta over g in range(D).
// For orthonormal D this is the synthesis problem g = D bpdn(A D, y, eta).
SolveResult l1_analysis(const Matrix &a, const Matrix &dict, const Vector &y, double eta,
                        const SolverOptions &opts = {});
SolveResult l1_analysis(const Matrix &a, const AnalysisOperator &op, const Vector &y, double eta,
                        const SolverOptions &opts = {});

// Single BPDN on the stacked system [A P_1; ...; A P_n] x = [y_1; ...; y_n]
// with eta = |(eta_1, ..., eta_n)|_2.
SolveResult global_stacked_solve(const SensingMatrix &a, const FusionFrame &frame, const MeasurementSet &ys,
                                 const SolverOptions &opts = {});

// ---- Exhaustive l0 search ------------------------------------------------

// Sparsest z with |A z - y|_2 <= eta (+1e-10 max(1, |y|) round-off slack)
// over supports of size 0..s_max, enumerated in lexicographic order. Ties
// go to the smaller residual, then to the earlier support. Hard caps:
// N <= 20, s_max <= 4. Throws Error when no support of size <= s_max fits.
SignalVector l0_oracle(const SensingMatrix &a, const Vector &y, double eta, int s_max);

} // namespace fusecs

#endif
