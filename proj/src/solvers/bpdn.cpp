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

#include "admm.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace fusecs
{

SolveResult bpdn(const Matrix &op, const Vector &y, double eta, const SolverOptions &opts)
{
    return detail::solve_l1_ball(nullptr, op, y, eta, opts);
}

SolveResult bpdn(const SensingMatrix &a, const IndexSetProjection &omega, const Vector &y, double eta,
                 const SolverOptions &opts)
{
    // Zero columns stay exactly zero through every ADMM step, so the
    // solution is supported on Omega by construction.
    return bpdn(a.masked(omega), y, eta, opts);
}

AnalysisOperator AnalysisOperator::from_dictionary(const Matrix &dict, double rank_tol)
{
    if (dict.rows() < 1 || dict.cols() < 1)
        throw DimensionError("analysis operator: empty dictionary");
    if (!dict.allFinite())
        throw InvalidArgument("analysis operator: dictionary entries must be finite");

    AnalysisOperator op;
    const Index k = dict.cols();
    if (k <= dict.rows() && ((dict.transpose() * dict) - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() < rank_tol)
    {
        op.basis = dict;
        op.identity = true;
        return op;
    }

    const Eigen::BDCSVD<Matrix> svd(dict, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector &sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv[r] > rank_tol * sv[0])
        ++r;
    if (r == 0)
        throw SingularMatrixError("analysis operator: dictionary is numerically zero", INFINITY);

    const Matrix vs = svd.matrixV().leftCols(r) * sv.head(r).cwiseInverse().asDiagonal();
    if (r == dict.rows())
    {
        op.full_space = true;
        op.basis = Matrix::Identity(r, r);
        op.coeffs = vs * svd.matrixU().leftCols(r).transpose(); // D^+
    }
    else
    {
        op.basis = svd.matrixU().leftCols(r);
        op.coeffs = vs;
    }
    return op;
}

Index AnalysisOperator::ambient_dim() const
{
    return basis.rows();
}

SolveResult l1_analysis(const Matrix &a, const AnalysisOperator &op, const Vector &y, double eta,
                        const SolverOptions &opts)
{
    if (a.cols() != op.ambient_dim())
        throw DimensionError("l1_analysis: dictionary and sensing matrix disagree on N");
    SolveResult result;
    if (op.full_space)
        result = detail::solve_l1_ball(&op.coeffs, a, y, eta, opts);
    else
        result = detail::solve_l1_ball(op.identity ? nullptr : &op.coeffs, a * op.basis, y, eta, opts);
    if (!op.full_space)
        result.solution = op.basis * result.solution;
    return result;
}

SolveResult l1_analysis(const Matrix &a, const Matrix &dict, const Vector &y, double eta, const SolverOptions &opts)
{
    if (a.cols() != dict.rows())
        throw DimensionError("l1_analysis: dictionary and sensing matrix disagree on N");
    return l1_analysis(a, AnalysisOperator::from_dictionary(dict), y, eta, opts);
}

SolveResult global_stacked_solve(const SensingMatrix &a, const FusionFrame &frame, const MeasurementSet &ys,
                                 const SolverOptions &opts)
{
    if (frame.ambient_dim() != a.cols())
        throw DimensionError("global_stacked_solve: frame and matrix disagree on N");
    ys.check(a.rows(), frame.size());

    const Index m = a.rows();
    const Index n = frame.size();
    Matrix stacked(m * n, a.cols());
    Vector y(m * n);
    double eta_sq = 0.0;
    for (Index i = 0; i < n; ++i)
    {
        stacked.middleRows(i * m, m) = a.masked(frame.projection(i));
        y.segment(i * m, m) = ys.measurements[static_cast<std::size_t>(i)];
        eta_sq += ys.noise_bounds[static_cast<std::size_t>(i)] * ys.noise_bounds[static_cast<std::size_t>(i)];
    }
    return bpdn(stacked, y, std::sqrt(eta_sq), opts);
}

} // namespace fusecs
