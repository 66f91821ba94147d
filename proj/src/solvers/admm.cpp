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

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <iostream>

namespace fusecs::detail
{

namespace
{

// Applies (Phi^T Phi + B^T B)^{-1}. When Phi^T Phi = I and B is wide the
// Woodbury form only needs the m x m factor of I + B B^T.
class NormalSolver
{
public:
    NormalSolver(const Matrix *phi, const Matrix &b) : b_(b)
    {
        const Index n = b.cols();
        bool identity_gram = phi == nullptr;
        if (!identity_gram && phi->rows() == n && phi->cols() == n)
            identity_gram = ((phi->transpose() * *phi) - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12;

        if (identity_gram && b.rows() < n)
        {
            woodbury_ = true;
            Matrix small = b * b.transpose();
            small.diagonal().array() += 1.0;
            small_.compute(small);
        }
        else
        {
            Matrix gram = b.transpose() * b;
            if (phi == nullptr)
                gram.diagonal().array() += 1.0;
            else
                gram += phi->transpose() * *phi;
            full_.compute(gram);
            if (full_.info() != Eigen::Success)
                throw SingularMatrixError("ADMM: Phi^T Phi + B^T B is not positive definite", INFINITY);
        }
    }

    Vector solve(const Vector &rhs) const
    {
        if (woodbury_)
            return rhs - b_.transpose() * small_.solve(b_ * rhs);
        return full_.solve(rhs);
    }

private:
    const Matrix &b_;
    bool woodbury_ = false;
    Eigen::LLT<Matrix> small_;
    Eigen::LLT<Matrix> full_;
};

Vector soft_threshold(const Vector &v, double t)
{
    return v.unaryExpr([t](double x) { return x > t ? x - t : (x < -t ? x + t : 0.0); });
}

Vector project_ball(const Vector &v, const Vector &center, double radius)
{
    const Vector d = v - center;
    const double norm = d.norm();
    if (norm <= radius)
        return v;
    return center + (radius / norm) * d;
}

std::vector<Index> support_of(const Vector &z)
{
    std::vector<Index> t;
    for (Index k = 0; k < z.size(); ++k)
        if (z[k] != 0.0)
            t.push_back(k);
    return t;
}

// Re-solves min |z|_1 s.t. |B z - y| <= eta on the support T of `z` with the
// sign pattern of z fixed, then checks the dual certificate
//   B_T^T lambda = sign(z_T),  |B_j^T lambda| <= 1 off T
// for lambda = r0/t + B_T (B_T^T B_T)^{-1} sign(z_T). Success proves that the
// returned point is a global minimizer.
bool polish_support(const Matrix &b, const Vector &y, double eta, const Vector &z, double tol_abs, Vector &out)
{
    const auto t_set = support_of(z);
    const Index k = static_cast<Index>(t_set.size());
    if (k == 0 || k > b.rows())
        return false;

    Matrix bt(b.rows(), k);
    Vector sigma(k);
    for (Index j = 0; j < k; ++j)
    {
        bt.col(j) = b.col(t_set[static_cast<std::size_t>(j)]);
        sigma[j] = z[t_set[static_cast<std::size_t>(j)]] > 0.0 ? 1.0 : -1.0;
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(bt);
    qr.setThreshold(1e-10);
    if (qr.rank() < k)
        return false;
    const Vector z_ls = qr.solve(y);
    const Vector r0 = y - bt * z_ls;

    const Eigen::LLT<Matrix> gram((bt.transpose() * bt).eval());
    if (gram.info() != Eigen::Success)
        return false;
    const Vector q = gram.solve(sigma);
    const double sq = sigma.dot(q);
    if (!(sq > 0.0))
        return false;

    Vector z_t;
    Vector lambda;
    const double r0_norm = r0.norm();
    if (eta == 0.0)
    {
        if (r0_norm > tol_abs + 1e-12 * y.norm())
            return false;
        z_t = z_ls;
        lambda = bt * q;
    }
    else
    {
        const double slack = eta * eta - r0_norm * r0_norm;
        if (!(slack > 0.0))
            return false;
        const double t = std::sqrt(slack / sq);
        z_t = z_ls - t * q;
        lambda = r0 / t + bt * q;
    }

    for (Index j = 0; j < k; ++j)
        if (z_t[j] * sigma[j] <= 0.0)
            return false;

    const Vector corr = b.transpose() * lambda;
    Vector full = Vector::Zero(b.cols());
    for (Index j = 0; j < k; ++j)
        full[t_set[static_cast<std::size_t>(j)]] = z_t[j];
    for (Index j = 0; j < b.cols(); ++j)
        if (full[j] == 0.0 && std::abs(corr[j]) > 1.0 + 1e-9)
            return false;

    out = std::move(full);
    return true;
}

} // namespace

SolveResult solve_l1_ball(const Matrix *phi, const Matrix &b, const Vector &y, double eta, const SolverOptions &opts)
{
    opts.validate();
    const Index n = b.cols();
    const Index m = b.rows();
    if (y.size() != m)
        throw DimensionError("l1 solver: measurement length does not match the operator");
    if (phi != nullptr && phi->cols() != n)
        throw DimensionError("l1 solver: analysis operator has the wrong number of columns");
    if (!(eta >= 0.0) || !std::isfinite(eta))
        throw InvalidArgument("l1 solver: eta must be finite and nonnegative");
    const Index p = phi == nullptr ? n : phi->rows();

    SolveResult result;
    result.solution = Vector::Zero(n);
    if (y.norm() <= eta)
    {
        // Zero is feasible and minimizes every norm.
        result.converged = true;
        result.residual = y.norm();
        return result;
    }

    const NormalSolver normal(phi, b);
    const double rho = opts.penalty;
    auto apply_phi = [phi](const Vector &v) -> Vector { return phi == nullptr ? v : Vector(*phi * v); };
    auto apply_phi_t = [phi](const Vector &v) -> Vector { return phi == nullptr ? v : Vector(phi->transpose() * v); };

    Vector c = Vector::Zero(n);
    Vector z = Vector::Zero(p), lz = Vector::Zero(p);
    Vector u = Vector::Zero(m), lu = Vector::Zero(m);
    const double feas_tol = eta + opts.tol_abs + opts.tol_rel * y.norm();
    const double sqrt_pm = std::sqrt(static_cast<double>(p + m));
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    std::vector<Index> last_support;
    std::vector<Index> last_failed_polish;
    constexpr int polish_every = 10;

    for (int it = 1; it <= opts.max_iter; ++it)
    {
        c = normal.solve(apply_phi_t(z - lz) + b.transpose() * (u - lu));
        const Vector phic = apply_phi(c);
        const Vector bc = b * c;

        const Vector z_old = z, u_old = u;
        z = soft_threshold(phic + lz, 1.0 / rho);
        u = project_ball(bc + lu, y, eta);
        const Vector rz = phic - z, ru = bc - u;
        lz += rz;
        lu += ru;
        result.iterations = it;

        if (opts.record_history)
        {
            const double dw = (z - z_old).squaredNorm() + (u - u_old).squaredNorm();
            result.fixed_point_residuals.push_back(rho * (dw + rz.squaredNorm() + ru.squaredNorm()));
        }

        const double r_primal = std::sqrt(rz.squaredNorm() + ru.squaredNorm());
        const double s_dual = rho * (apply_phi_t(z - z_old) + b.transpose() * (u - u_old)).norm();
        const double eps_primal = sqrt_pm * opts.tol_abs +
                                  opts.tol_rel * std::max(std::sqrt(phic.squaredNorm() + bc.squaredNorm()),
                                                          std::sqrt(z.squaredNorm() + u.squaredNorm()));
        const double eps_dual = sqrt_n * opts.tol_abs + opts.tol_rel * rho * (apply_phi_t(lz) + b.transpose() * lu).norm();

        const Vector &candidate = phi == nullptr ? z : c;
        if (r_primal <= eps_primal && s_dual <= eps_dual && (b * candidate - y).norm() <= feas_tol)
        {
            result.converged = true;
            break;
        }

        if (opts.polish && phi == nullptr && it % polish_every == 0)
        {
            auto support = support_of(z);
            if (support == last_support && support != last_failed_polish)
            {
                Vector polished;
                if (polish_support(b, y, eta, z, opts.tol_abs, polished))
                {
                    z = std::move(polished);
                    result.converged = true;
                    result.polished = true;
                    break;
                }
                last_failed_polish = support;
            }
            last_support = std::move(support);
        }

        if (opts.verbose && it % 100 == 0)
            std::cerr << "admm it " << it << " r=" << r_primal << " s=" << s_dual << '\n';
    }

    result.solution = phi == nullptr ? z : c;
    result.residual = (b * result.solution - y).norm();
    return result;
}

} // namespace fusecs::detail
