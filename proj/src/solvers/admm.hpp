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

#ifndef FUSECS_SOLVERS_ADMM_HPP
#define FUSECS_SOLVERS_ADMM_HPP

#include "fusecs/solvers.hpp"

namespace fusecs::detail
{

// Solves  min |Phi c|_1  s.t.  |B c - y|_2 <= eta  (Phi = I when phi is
// null) by ADMM on the splitting z = Phi c, u = B c:
//
//   c <- (Phi^T Phi + B^T B)^{-1} (Phi^T (z - lz) + B^T (u - lu))
//   z <- soft(Phi c + lz, 1/rho)
//   u <- proj_{|u - y| <= eta}(B c + lu)
//   lz += Phi c - z,  lu += B c - u
//
// Result.solution holds z when Phi = I (exactly sparse) and c otherwise.
SolveResult solve_l1_ball(const Matrix *phi, const Matrix &b, const Vector &y, double eta, const SolverOptions &opts);

} // namespace fusecs::detail

#endif
