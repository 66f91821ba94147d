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

#ifndef FUSECS_ANALYSIS_HPP
#define FUSECS_ANALYSIS_HPP

#include "fusecs/core.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace fusecs
{

// ---- Restricted isometry constants --------------------------------------

enum class RipMethod
{
    exhaustive,
    montecarlo
};

struct RipEstimate
{
    int s = 0;
    double delta = 0.0;
    RipMethod method = RipMethod::exhaustive;
    int trials = 0;          // montecarlo only
    std::uint64_t seed = 0;  // montecarlo only
    std::optional<std::vector<Index>> subspace; // 0-based Omega when restricted
    std::vector<Index> worst_support;           // 0-based, attains delta
};

// Supports visited by rip_exhaustive at most.
inline constexpr double rip_exhaustive_cap = 1e6;

// C(n, k) as a double (exact up to 2^53).
double binomial_coefficient(Index n, Index k);

// delta_s = max over S subset of Omega, |S| = s, of the largest deviation of an
// eigenvalue of A_S^T A_S from 1. Closed forms for s <= 2, a symmetric
// eigensolve otherwise. Throws InvalidArgument when more than
// rip_exhaustive_cap supports would be needed (use rip_montecarlo).
RipEstimate rip_exhaustive(const SensingMatrix &a, int s, const std::optional<IndexSetProjection> &omega = std::nullopt);

// Maximum over `trials` uniformly drawn supports; a lower bound on delta_s.
// Support t comes from derive_seed(seed, t), so larger trial counts visit a
// superset of supports. When trials reaches the number of supports the
// supports are enumerated instead and the value equals rip_exhaustive.
RipEstimate rip_montecarlo(const SensingMatrix &a, int s, const std::optional<IndexSetProjection> &omega, int trials,
                           std::uint64_t seed);

struct PripReport
{
    std::vector<RipEstimate> per_subspace; // delta_{s_i} on W_i
    std::vector<bool> pass;                // delta_i <= target_i
    double lower = 0.0;                    // C min_i (1 - delta_i)
    double upper = 0.0;                    // D max_i (1 + delta_i)
    int sandwich_trials = 0;
    int sandwich_violations = 0;
};

// Partial RIP on each W_i (exhaustive when within the cap, otherwise
// `fallback_trials` Monte Carlo supports), plus the sandwich
//   C_o |v|^2 <= sum_i |A P_i v|^2 <= D_o |v|^2
// on `sandwich_trials` random vectors with |P_i v|_0 <= s_i for every i.
PripReport prip_check(const SensingMatrix &a, const FusionFrame &frame, const SparsityPattern &pattern,
                      const std::vector<double> &delta_targets, int sandwich_trials = 100, std::uint64_t seed = 0,
                      int fallback_trials = 10000);

// ---- Null space property -------------------------------------------------

struct NspConstants
{
    double rho = 0.0;
    double tau = 0.0;
    int order = 0;       // sparsity s the constants refer to (0: unspecified)
    Index subspace = -1; // index of W_i (-1: unspecified)
};

// 4 / sqrt(41): largest delta accepted by rip_to_nsp.
double rip_to_nsp_threshold();

// l2 robust NSP constants from a RIP constant of order 2s:
//   rho = delta / (sqrt(1 - delta^2) - delta/4)
//   tau = sqrt(1 + delta) / (sqrt(1 - delta^2) - delta/4).
// Throws InvalidArgument unless 0 <= delta < 4/sqrt(41).
NspConstants rip_to_nsp(double delta);

// l2 constants (rho, tau) of order s imply l1 constants (rho, sqrt(s) tau).
NspConstants l1_from_l2(const NspConstants &c, int s);

struct NspViolationReport
{
    int trials = 0;
    int violations = 0;
    double worst_margin = -INFINITY; // max of lhs - rhs seen
    Vector worst_vector;
};

// Falsifier for the partial NSP
//   |(P v)_S|_q <= rho / s^(1 - 1/q) |(P v)_{S^c}|_1 + tau |A v|_2,  q in {1, 2}
// over |S| <= s, S subset of Omega. For each sampled v the worst S (the s
// largest entries of |P v|) is checked exactly. Half the samples are
// Gaussian in R^N; the rest are Omega-supported right singular vectors of
// A_{S'} for the smallest singular value, with S' running over all s-subsets
// of Omega when they fit in the budget and random 2s-subsets otherwise. A
// clean report is evidence, not a certificate.
NspViolationReport nsp_sample_check(const SensingMatrix &a, const IndexSetProjection &omega, int s, double rho,
                                    double tau, int trials, std::uint64_t seed, int q = 1);

// ---- Measurement planning ------------------------------------------------

// C_subg min(delta)^-2 (s ln(eN/s) + ln(2n/eps)) with s = max s_i, before
// rounding. C_subg is the non-explicit subgaussian constant (default 1).
double required_measurements_real(Index n_dim, const SparsityPattern &pattern, const std::vector<double> &deltas,
                                  double eps, double c_subg = 1.0);
int required_measurements(Index n_dim, const SparsityPattern &pattern, const std::vector<double> &deltas, double eps,
                          double c_subg = 1.0);

// ---- Error bounds --------------------------------------------------------

// i-th entry: l1 norm of P_i x outside its s_i largest-magnitude entries.
std::vector<double> best_term_errors(const SignalVector &x, const FusionFrame &frame, const SparsityPattern &pattern);

// (1/C) sum_i |A_{Omega_i}^+ e_i|_2^2 with the exact noise vectors. Upper
// bound on the squared fused error of pseudo-inverse local solves.
double bound_prop2(const FusionFrame &frame, const SensingMatrix &a, const std::vector<Vector> &noise);

// (1/C) sum_i |A_{Omega_i}^+|^2 eta_i^2, usable when only noise levels are
// known.
double bound_prop2(const FusionFrame &frame, const SensingMatrix &a, const std::vector<double> &noise_norms);

// (2/C) (<rho_vec, sigma> + <tau_vec, eta>) with rho_vec_i = (1+rho_i)/(1-rho_i)
// and tau_vec_i = 2 tau_i/(1-rho_i), for l1 robust NSP constants. Bounds the
// l2 fused error of local BPDN solves.
double bound_rdnsp(const FusionFrame &frame, const std::vector<NspConstants> &constants,
                   const std::vector<double> &sigma, const std::vector<double> &noise_norms);

// l_p companion (1 <= p <= 2) for l2 robust NSP constants:
//   (1/C) sum_i [rho_vec_i sigma_i / s_i^(1-1/p) + tau_vec_i eta_i / s_i^(1/2-1/p)]
// with rho_vec_i = 2(1+rho_i)^2/(1-rho_i), tau_vec_i = (3-rho_i) tau_i/(1-rho_i).
double bound_rdnsp_lp(const FusionFrame &frame, const std::vector<NspConstants> &constants,
                      const std::vector<double> &sigma, const std::vector<double> &noise_norms,
                      const SparsityPattern &pattern, double p);

// 960 sqrt(2) / (16 - 41 delta^2)^2 and the uniform bound (n/C) * that * eta.
double informal_constant(double delta);
double informal_bound(Index n, int lower_frame_bound, double delta, double eta);

// Mixed bound for a pipeline that used lsq on some channels and BPDN on the
// others (`kinds`):
//   (1/C) ( sum_lsq |A_{Omega_i}^+ e_i|_2
//           + sum_bpdn [2(1+rho_i)/(1-rho_i) sigma_i + 4 tau_i/(1-rho_i) |e_i|_2] )
// with l1 NSP constants on the BPDN channels (entries for lsq channels are
// ignored). Assumes eta_i = |e_i|.
double bound_constrained(const FusionFrame &frame, const SensingMatrix &a, const std::vector<SolverKind> &kinds,
                         const std::vector<Vector> &noise, const std::vector<NspConstants> &constants,
                         const std::vector<double> &sigma);

} // namespace fusecs

#endif
