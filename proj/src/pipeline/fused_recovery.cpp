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

#include "fusecs/frames.hpp"
#include "fusecs/pipeline.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace fusecs
{

namespace
{

constexpr double lsq_pivot_ratio = 1e-10;

// Least-squares estimate when A_Omega is well conditioned enough, otherwise
// nothing (the caller falls back to BPDN).
std::optional<Vector> try_lsq(const Matrix &a_omega, const Vector &y, double pivot_threshold)
{
    const Eigen::ColPivHouseholderQR<Matrix> qr(a_omega);
    const Vector pivots = qr.matrixR().diagonal().cwiseAbs();
    const double largest = pivots.maxCoeff();
    const double smallest = pivots.minCoeff();
    if (!(smallest > pivot_threshold) || smallest < lsq_pivot_ratio * largest)
        return std::nullopt;
    return Vector(qr.solve(y));
}

LocalSolve from_solver(const IndexSetProjection &omega, const SolveResult &r, SolverKind kind)
{
    LocalSolve out;
    out.estimate = SignalVector(omega.embed(r.solution));
    out.kind = kind;
    out.iterations = r.iterations;
    out.converged = r.converged;
    return out;
}

LocalSolve solve_annotated(Index i, const SensingMatrix &a, const IndexSetProjection &omega, const Vector &y,
                           double eta, const PipelineConfig &cfg)
{
    try
    {
        return solve_channel(a, omega, y, eta, cfg);
    }
    catch (const SingularMatrixError &e)
    {
        throw SingularMatrixError("subspace " + std::to_string(i + 1) + ": " + e.what(), e.condition_estimate());
    }
    catch (const DimensionError &e)
    {
        throw DimensionError("subspace " + std::to_string(i + 1) + ": " + e.what());
    }
    catch (const Error &e)
    {
        throw ChannelError(i, e.what());
    }
}

} // namespace

OnlineFusion::OnlineFusion(const FusionFrame &frame) : frame_(frame), sum_(Vector::Zero(frame.ambient_dim())) {}

void OnlineFusion::add(Index channel, const SignalVector &local_estimate)
{
    if (channel < 0 || channel >= frame_.size())
        throw InvalidArgument("OnlineFusion: channel index out of range");
    if (local_estimate.size() != frame_.ambient_dim())
        throw DimensionError("OnlineFusion: estimate length does not match the frame");
    sum_ += local_estimate.values();
    ++received_;
}

SignalVector OnlineFusion::fuse(const PipelineConfig &cfg, int *iterations) const
{
    const SignalVector sum(sum_);
    if (iterations)
        *iterations = 0;
    if (!frame_.is_valid())
    {
        if (!cfg.allow_uncovered)
            throw InvalidFrameError("fusion: the projections do not cover every coordinate",
                                    validate(frame_).uncovered);
        return invert_fusion_pseudo(frame_, sum);
    }
    if (cfg.fusion == FusionMode::exact_diagonal)
        return invert_fusion_exact(frame_, sum);
    const FrameAlgorithmResult fa = frame_algorithm(frame_, sum, cfg.frame_k_max, cfg.frame_tol);
    if (iterations)
        *iterations = fa.iterations;
    return fa.estimate;
}

LocalSolve solve_channel(const SensingMatrix &a, const IndexSetProjection &omega, const Vector &y, double eta,
                         const PipelineConfig &cfg)
{
    if (omega.ambient_dim() != a.cols())
        throw DimensionError("projection dimension does not match the matrix");
    if (y.size() != a.rows())
        throw DimensionError("measurement length does not match the matrix");
    if (!(eta >= 0.0) || !std::isfinite(eta))
        throw InvalidArgument("noise level must be finite and nonnegative");

    LocalSolve out;
    out.estimate = SignalVector::zeros(a.cols());
    if (omega.rank() == 0)
        return out; // nothing to estimate on a trivial subspace

    const Matrix a_omega = a.columns(omega);
    switch (cfg.policy)
    {
    case SolverPolicy::force_lsq:
        out.estimate = SignalVector(omega.embed(lsq_columns(a_omega, y)));
        return out;
    case SolverPolicy::automatic:
        if (omega.rank() <= a.rows())
        {
            if (auto z = try_lsq(a_omega, y, cfg.lsq_pivot_threshold))
            {
                out.estimate = SignalVector(omega.embed(*z));
                return out;
            }
        }
        return from_solver(omega, bpdn(a_omega, y, eta, cfg.solver), SolverKind::bpdn);
    case SolverPolicy::force_bpdn:
        return from_solver(omega, bpdn(a_omega, y, eta, cfg.solver), SolverKind::bpdn);
    case SolverPolicy::force_l1_analysis: {
        // The local dictionary of a coordinate subspace is its own basis.
        AnalysisOperator op;
        op.basis = Matrix::Identity(omega.rank(), omega.rank());
        op.identity = true;
        return from_solver(omega, l1_analysis(a_omega, op, y, eta, cfg.solver), SolverKind::l1_analysis);
    }
    }
    throw InvalidArgument("unknown solver policy");
}

RecoveryReport fused_recover(const SensingMatrix &a, const FusionFrame &frame, const MeasurementSet &ys,
                             const PipelineConfig &cfg)
{
    if (frame.ambient_dim() != a.cols())
        throw DimensionError("fused_recover: frame and matrix disagree on N");
    const Index n = frame.size();
    ys.check(a.rows(), n);
    cfg.solver.validate();
    if (!cfg.noise_estimates.empty() && static_cast<Index>(cfg.noise_estimates.size()) != n)
        throw InvalidArgument("fused_recover: one noise estimate per subspace expected");
    const std::vector<double> &etas = cfg.noise_estimates.empty() ? ys.noise_bounds : cfg.noise_estimates;
    if (!frame.is_valid() && !cfg.allow_uncovered)
        throw InvalidFrameError("fused_recover: the projections do not cover every coordinate",
                                validate(frame).uncovered);

    const auto un = static_cast<std::size_t>(n);
    std::vector<LocalSolve> local(un);
    OnlineFusion fusion(frame);

    if (cfg.execution == ExecutionMode::sequential_online)
    {
        for (Index i = 0; i < n; ++i)
        {
            const auto ui = static_cast<std::size_t>(i);
            local[ui] = solve_annotated(i, a, frame.projection(i), ys.measurements[ui], etas[ui], cfg);
            fusion.add(i, local[ui].estimate);
        }
    }
    else
    {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const auto workers =
            static_cast<std::size_t>(std::min<Index>(cfg.jobs > 0 ? cfg.jobs : static_cast<int>(hw), n));
        std::vector<std::exception_ptr> errors(un);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t i = next++; i < un; i = next++)
            {
                try
                {
                    local[i] = solve_annotated(static_cast<Index>(i), a, frame.projection(static_cast<Index>(i)),
                                               ys.measurements[i], etas[i], cfg);
                }
                catch (...)
                {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(work);
        work();
        for (auto &t : pool)
            t.join();
        for (const auto &e : errors)
            if (e)
                std::rethrow_exception(e);
        // Reduce in channel order so the sum matches the sequential mode bit for bit.
        for (Index i = 0; i < n; ++i)
            fusion.add(i, local[static_cast<std::size_t>(i)].estimate);
    }

    RecoveryReport report;
    report.fused_estimate = fusion.fuse(cfg, &report.fusion_iterations);
    for (Index i = 0; i < n; ++i)
    {
        const auto ui = static_cast<std::size_t>(i);
        report.residuals.push_back((a.entries() * local[ui].estimate.values() - ys.measurements[ui]).norm());
        report.solver_used.push_back(local[ui].kind);
        report.iterations.push_back(local[ui].iterations);
        report.converged.push_back(local[ui].converged);
        report.local_estimates.push_back(std::move(local[ui].estimate));
    }
    return report;
}

} // namespace fusecs
