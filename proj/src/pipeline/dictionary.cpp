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

#include "fusecs/pipeline.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace fusecs
{

SubspaceProjector SubspaceProjector::from_index_set(const IndexSetProjection &omega)
{
    Matrix basis = Matrix::Zero(omega.ambient_dim(), omega.rank());
    for (std::size_t j = 0; j < omega.indices().size(); ++j)
        basis(omega.indices()[j], static_cast<Index>(j)) = 1.0;
    return SubspaceProjector(std::move(basis));
}

SubspaceProjector SubspaceProjector::from_span(const Matrix &span, double tol)
{
    if (span.rows() < 1)
        throw DimensionError("SubspaceProjector: empty ambient space");
    if (span.cols() == 0)
        return SubspaceProjector(Matrix::Zero(span.rows(), 0));
    const Eigen::BDCSVD<Matrix> svd(span, Eigen::ComputeThinU);
    const Vector &sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv[r] > tol * sv[0])
        ++r;
    return SubspaceProjector(svd.matrixU().leftCols(r));
}

Vector SubspaceProjector::apply(const Vector &v) const
{
    if (v.size() != ambient_dim())
        throw DimensionError("SubspaceProjector: vector length does not match");
    return basis_ * (basis_.transpose() * v);
}

LocalDictionary build_local_dictionary(const Matrix &dict, const SubspaceProjector &p, Index subspace,
                                       double tol_kernel)
{
    if (dict.rows() != p.ambient_dim())
        throw DimensionError("build_local_dictionary: dictionary and projector disagree on N");
    if (!(tol_kernel > 0.0))
        throw InvalidArgument("build_local_dictionary: tolerance must be positive");

    LocalDictionary out;
    out.subspace = subspace;
    std::vector<Vector> kept, moved;
    for (Index k = 0; k < dict.cols(); ++k)
    {
        const Vector d = dict.col(k);
        const double dn = d.norm();
        const Vector pd = p.apply(d);
        if (pd.norm() <= tol_kernel * dn)
        {
            out.lambda.push_back(k); // includes zero columns
        }
        else if ((pd - d).norm() <= tol_kernel * dn)
        {
            out.omega.push_back(k);
            kept.push_back(d);
        }
        else
        {
            out.gamma.push_back(k);
            moved.push_back(pd);
        }
    }
    out.matrix.resize(dict.rows(), static_cast<Index>(kept.size() + moved.size()));
    Index col = 0;
    for (const auto &v : kept)
        out.matrix.col(col++) = v;
    for (const auto &v : moved)
        out.matrix.col(col++) = v;
    return out;
}

GeneralFusionFrame::GeneralFusionFrame(std::vector<SubspaceProjector> projectors) : projectors_(std::move(projectors))
{
    if (projectors_.empty())
        throw InvalidArgument("GeneralFusionFrame: no subspaces");
    const Index n = projectors_.front().ambient_dim();
    operator_ = Matrix::Zero(n, n);
    for (const auto &p : projectors_)
    {
        if (p.ambient_dim() != n)
            throw DimensionError("GeneralFusionFrame: subspaces live in different ambient spaces");
        operator_.noalias() += p.basis() * p.basis().transpose();
    }
    identity_ = (operator_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12;
    if (identity_)
    {
        lower_ = upper_ = 1.0;
        return;
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(operator_, Eigen::EigenvaluesOnly);
    lower_ = eig.eigenvalues()[0];
    upper_ = eig.eigenvalues()[n - 1];
}

Vector GeneralFusionFrame::invert(const Vector &v) const
{
    if (v.size() != ambient_dim())
        throw DimensionError("GeneralFusionFrame: vector length does not match");
    if (identity_)
        return v;
    if (!(lower_ > 1e-12 * upper_))
        throw InvalidFrameError("GeneralFusionFrame: the subspaces do not span R^N", {});
    return operator_.llt().solve(v);
}

RecoveryReport dict_fused_recover(const SensingMatrix &a, const Matrix &dict, const GeneralFusionFrame &frame,
                                  const MeasurementSet &ys, DictionaryMethod method, const SolverOptions &opts)
{
    if (dict.rows() != a.cols() || frame.ambient_dim() != a.cols())
        throw DimensionError("dict_fused_recover: dictionary, frame and matrix disagree on N");
    ys.check(a.rows(), frame.size());
    opts.validate();

    RecoveryReport report;
    Vector sum = Vector::Zero(a.cols());
    const SolverKind kind = method == DictionaryMethod::analysis ? SolverKind::l1_analysis : SolverKind::l1_synthesis;
    for (Index i = 0; i < frame.size(); ++i)
    {
        const auto ui = static_cast<std::size_t>(i);
        const Vector &y = ys.measurements[ui];
        const LocalDictionary local = build_local_dictionary(dict, frame.projector(i), i);
        Vector f = Vector::Zero(a.cols());
        int iterations = 0;
        bool converged = true;
        if (local.matrix.cols() > 0)
        {
            SolveResult r;
            try
            {
                if (method == DictionaryMethod::analysis)
                {
                    r = l1_analysis(a.entries(), local.matrix, y, ys.noise_bounds[ui], opts);
                    f = r.solution;
                }
                else
                {
                    r = bpdn(Matrix(a.entries() * local.matrix), y, ys.noise_bounds[ui], opts);
                    f = local.matrix * r.solution;
                }
            }
            catch (const Error &e)
            {
                throw ChannelError(i, e.what());
            }
            iterations = r.iterations;
            converged = r.converged;
        }
        sum += f;
        report.residuals.push_back((a.entries() * f - y).norm());
        report.solver_used.push_back(kind);
        report.iterations.push_back(iterations);
        report.converged.push_back(converged);
        report.local_estimates.emplace_back(std::move(f));
    }
    report.fused_estimate = SignalVector(frame.invert(sum));
    return report;
}

} // namespace fusecs
