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

#include "fusecs/solvers.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace fusecs
{

namespace
{

constexpr double singular_pivot_ratio = 1e-10;

} // namespace

void SolverOptions::validate() const
{
    if (max_iter < 1)
        throw InvalidArgument("SolverOptions: max_iter must be at least 1");
    if (!(tol_abs > 0.0) || !(tol_rel > 0.0))
        throw InvalidArgument("SolverOptions: tolerances must be positive");
    if (!(penalty > 0.0) || !std::isfinite(penalty))
        throw InvalidArgument("SolverOptions: penalty must be positive");
}

double lsq_rank1(const Vector &a, const Vector &y)
{
    if (a.size() != y.size())
        throw DimensionError("lsq_rank1: column and measurement lengths differ");
    const double aa = a.squaredNorm();
    if (!(aa > 0.0))
        throw InvalidArgument("lsq_rank1: zero column");
    return a.dot(y) / aa;
}

Vector lsq_columns(const Matrix &a_omega, const Vector &y)
{
    if (a_omega.rows() != y.size())
        throw DimensionError("least squares: measurement length does not match the matrix");
    const Index k = a_omega.cols();
    if (k == 0)
        return Vector::Zero(0);
    if (k > a_omega.rows())
        throw DimensionError("least squares: more columns than measurements");
    if (k == 1)
        return Vector::Constant(1, lsq_rank1(a_omega.col(0), y));

    const Eigen::ColPivHouseholderQR<Matrix> qr(a_omega);
    const Vector pivots = qr.matrixR().diagonal().cwiseAbs();
    const double largest = pivots.maxCoeff();
    const double smallest = pivots.minCoeff();
    if (!(largest > 0.0) || smallest < singular_pivot_ratio * largest)
    {
        std::ostringstream msg;
        const double cond = smallest > 0.0 ? largest / smallest : INFINITY;
        msg << "least squares: rank-deficient column block (pivot condition estimate " << cond << ")";
        throw SingularMatrixError(msg.str(), cond);
    }
    return qr.solve(y);
}

SignalVector lsq_subspace(const SensingMatrix &a, const IndexSetProjection &omega, const Vector &y)
{
    return SignalVector(omega.embed(lsq_columns(a.columns(omega), y)));
}

double pinv_norm(const Matrix &m)
{
    if (m.cols() == 0)
        return 0.0;
    const Eigen::JacobiSVD<Matrix> svd(m);
    const Vector sv = svd.singularValues();
    const double smax = sv.maxCoeff();
    const double smin = m.cols() > m.rows() ? 0.0 : sv.minCoeff();
    if (!(smax > 0.0) || smin < singular_pivot_ratio * smax)
        throw SingularMatrixError("pinv_norm: matrix is not of full column rank", smin > 0.0 ? smax / smin : INFINITY);
    return 1.0 / smin;
}

} // namespace fusecs
