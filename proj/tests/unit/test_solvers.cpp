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
#include "fusecs/random.hpp"
#include "fusecs/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace fusecs;

namespace
{

Matrix from_rows(Index rows, Index cols, std::initializer_list<double> v)
{
    Matrix m(rows, cols);
    auto it = v.begin();
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = *it++;
    return m;
}

SolverOptions tight()
{
    SolverOptions o;
    o.tol_abs = 1e-11;
    o.tol_rel = 1e-10;
    o.max_iter = 200000;
    return o;
}

std::vector<Index> support(const Vector &z, double rel = 1e-6)
{
    std::vector<Index> s;
    const double scale = z.cwiseAbs().maxCoeff();
    for (Index k = 0; k < z.size(); ++k)
        if (std::abs(z[k]) > rel * scale)
            s.push_back(k);
    return s;
}

// Basis pursuit (eta = 0) by vertex enumeration: an optimal point of
// min |z|_1 s.t. B z = y is a basic solution supported on m columns.
double basis_pursuit_oracle(const Matrix &b, const Vector &y)
{
    const Index m = b.rows(), n = b.cols();
    std::vector<Index> comb(static_cast<std::size_t>(m));
    std::iota(comb.begin(), comb.end(), Index{0});
    double best = INFINITY;
    for (;;)
    {
        Matrix sub(m, m);
        for (Index j = 0; j < m; ++j)
            sub.col(j) = b.col(comb[static_cast<std::size_t>(j)]);
        const Eigen::FullPivLU<Matrix> lu(sub);
        if (lu.isInvertible())
            best = std::min(best, lu.solve(y).lpNorm<1>());
        Index i = m - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - m + i)
            --i;
        if (i < 0)
            break;
        ++comb[static_cast<std::size_t>(i)];
        for (Index j = i + 1; j < m; ++j)
            comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

// Smallest singular value from the eigenvalues of the Gram matrix.
double sigma_min_gram(const Matrix &a)
{
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(a.transpose() * a, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, eig.eigenvalues()[0]));
}

} // namespace

// ---- least squares --------------------------------------------------------

TEST(LeastSquares, RankOneExamples)
{
    const Vector a = (Vector(3) << 1, -2, 2).finished();
    EXPECT_DOUBLE_EQ(lsq_rank1(a, 3 * a), 3.0);
    const Vector e = (Vector(3) << 2, 1, 0).finished(); // orthogonal to a
    EXPECT_NEAR(lsq_rank1(a, 3 * a + e), 3.0, 1e-15);
    EXPECT_THROW(lsq_rank1(Vector::Zero(3), a), InvalidArgument);
}

TEST(LeastSquares, RankOneErrorBound)
{
    Rng rng(3);
    for (int t = 0; t < 200; ++t)
    {
        const Vector a = gaussian_vector(7, rng);
        const Vector e = 0.1 * gaussian_vector(7, rng);
        const double x = std::normal_distribution<double>()(rng);
        EXPECT_LE(std::abs(lsq_rank1(a, x * a + e) - x), e.norm() / a.norm() + 1e-14);
    }
}

TEST(LeastSquares, SubspaceNoiselessIsExact)
{
    const auto a = SensingMatrix::gaussian(30, 50, 1);
    const IndexSetProjection omega(50, {1, 4, 9, 16, 25, 36, 49});
    Rng rng(2);
    const Vector x = omega.apply(gaussian_vector(50, rng));
    const SignalVector est = lsq_subspace(a, omega, a.entries() * x);
    EXPECT_LT((est.values() - x).norm(), 1e-10 * x.norm());
}

TEST(LeastSquares, SubspaceErrorWithinPseudoInverseBound)
{
    Rng rng(5);
    for (int t = 0; t < 100; ++t)
    {
        const auto a = SensingMatrix::gaussian(20, 40, derive_seed(9, t));
        const IndexSetProjection omega(40, sample_subset(40, 12, rng));
        const Vector x = omega.apply(gaussian_vector(40, rng));
        const Vector e = 0.05 * gaussian_vector(20, rng);
        const SignalVector est = lsq_subspace(a, omega, a.entries() * x + e);
        const double pinv = 1.0 / sigma_min_gram(a.columns(omega));
        EXPECT_NEAR(pinv_norm(a.columns(omega)), pinv, 1e-8 * pinv);
        EXPECT_LE((est.values() - x).norm(), pinv * e.norm() * (1 + 1e-10));
    }
}

TEST(LeastSquares, SingularBlockThrows)
{
    Matrix m = Matrix::Random(6, 3);
    m.col(2) = m.col(0) - 2.0 * m.col(1);
    EXPECT_THROW(lsq_columns(m, Vector::Ones(6)), SingularMatrixError);
    EXPECT_THROW(pinv_norm(m), SingularMatrixError);
    EXPECT_THROW(lsq_columns(Matrix::Random(2, 3), Vector::Ones(2)), DimensionError);
}

TEST(LeastSquares, SmallestSingularValueConcentration)
{
    // sigma_min(A_Omega) >= 1 - sqrt(r/m) - t fails with probability at most
    // exp(-m t^2 / 2) for normalized Gaussian A.
    const Index m = 100, r = 20;
    const double t = 0.2;
    const double threshold = 1.0 - std::sqrt(static_cast<double>(r) / m) - t;
    int failures = 0;
    const int draws = 1000;
    for (int d = 0; d < draws; ++d)
    {
        const auto a = SensingMatrix::gaussian(m, r, derive_seed(41, d));
        failures += sigma_min_gram(a.entries()) < threshold;
    }
    EXPECT_LE(static_cast<double>(failures) / draws, std::exp(-m * t * t / 2.0));
}

// ---- BPDN -----------------------------------------------------------------

TEST(Bpdn, ZeroMeasurement)
{
    const auto a = SensingMatrix::gaussian(5, 9, 1);
    const SolveResult r = bpdn(a.entries(), Vector::Zero(5), 0.0);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.solution, Vector::Zero(9));
}

TEST(Bpdn, NoiseBallContainsZero)
{
    const auto a = SensingMatrix::gaussian(5, 9, 1);
    const Vector y = Vector::Constant(5, 0.1);
    const SolveResult r = bpdn(a.entries(), y, y.norm() * 1.01);
    EXPECT_EQ(r.solution, Vector::Zero(9));
}

TEST(Bpdn, OneSparseMatchesL0Oracle)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto a = SensingMatrix::gaussian(6, 8, seed);
        Vector x = Vector::Zero(8);
        x[static_cast<Index>(seed % 8)] = 1.5;
        const Vector y = a.entries() * x;
        const SolveResult r = bpdn(a.entries(), y, 0.0);
        EXPECT_LT((r.solution - x).norm(), 1e-6);
        EXPECT_EQ(support(r.solution), support(l0_oracle(a, y, 0.0, 2).values()));
    }
}

TEST(Bpdn, BasisPursuitMatchesVertexEnumeration)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto a = SensingMatrix::gaussian(4, 9, 100 + seed);
        Rng rng(seed);
        const Vector y = gaussian_vector(4, rng); // generic, not sparse
        const SolveResult r = bpdn(a.entries(), y, 0.0, tight());
        ASSERT_TRUE(r.converged);
        const double oracle = basis_pursuit_oracle(a.entries(), y);
        EXPECT_NEAR(r.solution.lpNorm<1>(), oracle, 1e-6 * oracle);
        EXPECT_LT(r.residual, 1e-7);
    }
}

TEST(Bpdn, MatchesConicSolverReference)
{
    // Reference from an interior-point conic solver at 1e-12 tolerances.
    const Matrix b = from_rows(5, 8, {-1.375, 1.037,  0.003,  -1.915, -1.216, -0.116, -0.809, -1.071, -0.863, -1.315,
                                      -0.936, 2.202,  0.166,  -0.361, -0.918, -1.481, -2.885, -0.311, -0.534, 2.19,
                                      0.033,  -0.981, -0.871, 1.924,  -0.617, -0.118, -0.319, 0.503,  -0.313, 0.748,
                                      -1.078, 0.928,  0.314,  0.202,  -1.312, -0.473, -0.284, -1.19,  0.327,  0.646});
    const Vector y = (Vector(5) << -0.17, 0.885, -1.212, 1.174, 0.391).finished();
    Vector ref = Vector::Zero(8);
    ref[0] = 0.8154410393752168;
    ref[2] = -0.36419810890910537;
    ref[6] = -1.2309016407913285;
    const SolveResult r = bpdn(b, y, 0.3, tight());
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.solution.lpNorm<1>(), 2.4105407891094517, 1e-7);
    EXPECT_LT((r.solution - ref).norm(), 1e-5);
    EXPECT_LE(r.residual, 0.3 + 1e-8);
}

TEST(Bpdn, FixedPointResidualIsNonIncreasing)
{
    const auto a = SensingMatrix::gaussian(20, 50, 8);
    Rng rng(8);
    const Vector y = a.entries() * sparse_gaussian_vector(50, 6, rng) + 0.01 * gaussian_vector(20, rng);
    SolverOptions o;
    o.record_history = true;
    o.polish = false;
    const SolveResult r = bpdn(a.entries(), y, 0.1, o);
    ASSERT_GT(r.fixed_point_residuals.size(), 5u);
    for (std::size_t k = 1; k < r.fixed_point_residuals.size(); ++k)
        EXPECT_LE(r.fixed_point_residuals[k], r.fixed_point_residuals[k - 1] * (1 + 1e-9) + 1e-15);
}

TEST(Bpdn, LocalSolutionStaysInSubspace)
{
    const auto a = SensingMatrix::gaussian(15, 40, 2);
    const IndexSetProjection omega(40, {0, 3, 7, 8, 11, 19, 20, 25, 30, 31, 33, 35, 36, 37, 39, 2, 5, 14, 22, 28});
    Rng rng(1);
    const Vector y = a.entries() * gaussian_vector(40, rng); // mass everywhere
    const SolveResult r = bpdn(a, omega, y, 0.5);
    const double outside = (r.solution - omega.apply(r.solution)).lpNorm<1>();
    EXPECT_LE(outside, 1e-8 * r.solution.lpNorm<1>());
}

TEST(Bpdn, StackedSolveWithOneChannelIsBpdn)
{
    const auto a = SensingMatrix::gaussian(10, 20, 4);
    const IndexSetProjection omega(20, {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 19});
    const FusionFrame frame(20, {omega});
    Rng rng(2);
    const Vector y = a.entries() * omega.apply(sparse_gaussian_vector(20, 3, rng));
    const MeasurementSet ys{{y}, {0.05}};
    const SolveResult s = global_stacked_solve(a, frame, ys);
    const SolveResult d = bpdn(a.masked(omega), y, 0.05);
    EXPECT_EQ(s.solution, d.solution);
}

TEST(Bpdn, StackedSolvePartitionRecoversSparseSignal)
{
    const auto a = SensingMatrix::gaussian(12, 24, 6);
    const FusionFrame frame = build_family(ProjectionFamilySpec::partition(24, {8, 8, 8}));
    Vector x = Vector::Zero(24);
    x[1] = 1.0;
    x[10] = -2.0;
    x[20] = 0.5;
    MeasurementSet ys;
    for (const auto &p : frame.projections())
    {
        ys.measurements.push_back(a.entries() * p.apply(x));
        ys.noise_bounds.push_back(0.0);
    }
    const SolveResult r = global_stacked_solve(a, frame, ys, tight());
    EXPECT_LT((r.solution - x).norm(), 1e-6);
}

TEST(Bpdn, RejectsBadOptions)
{
    SolverOptions o;
    o.max_iter = 0;
    EXPECT_THROW(bpdn(Matrix::Identity(2, 2), Vector::Ones(2), 0.0, o), InvalidArgument);
    EXPECT_THROW(bpdn(Matrix::Identity(2, 2), Vector::Ones(3), 0.0), DimensionError);
    EXPECT_THROW(bpdn(Matrix::Identity(2, 2), Vector::Ones(2), -1.0), InvalidArgument);
}

// ---- l1 analysis ----------------------------------------------------------

TEST(L1Analysis, IdentityDictionaryIsBpdn)
{
    const auto a = SensingMatrix::gaussian(8, 16, 3);
    Rng rng(3);
    const Vector y = a.entries() * sparse_gaussian_vector(16, 3, rng);
    const SolveResult an = l1_analysis(a.entries(), Matrix::Identity(16, 16), y, 0.01);
    const SolveResult bp = bpdn(a.entries(), y, 0.01);
    EXPECT_EQ(an.solution, bp.solution);
}

TEST(L1Analysis, HaarOneSparseIsExact)
{
    const Matrix h = haar_basis(32, 5);
    const auto a = SensingMatrix::gaussian(12, 32, 9);
    for (Index k : {0, 5, 17, 31})
    {
        const Vector g = 2.0 * h.col(k);
        const SolveResult r = l1_analysis(a.entries(), h, a.entries() * g, 0.0);
        EXPECT_LT((r.solution - g).norm(), 1e-6);
    }
}

TEST(L1Analysis, RedundantDictionaryMatchesConicReference)
{
    const Matrix a = from_rows(3, 4, {-1.242, -1.904, -1.404, 0.048, 2.056, 1.154, 0.331, 1.558, -0.264, -0.043, -0.26,
                                      0.218});
    const Matrix d = from_rows(4, 6, {0.019, 0.14,   0.496,  0.923, 2.109,  1.179, 0.736,  0.175,
                                      0.393, 0.191,  -1.749, -0.663, 0.158, -2.044, -0.073, 0.858,
                                      -0.949, -1.224, 2.009, 0.662,  -0.005, -0.436, 1.064,  0.643});
    const Vector y = (Vector(3) << 0.253, -0.662, -0.338).finished();
    const Vector ref = (Vector(4) << 0.16008220940744303, -0.26256740502544557, 0.03661239792172568,
                        -0.4556717035265895)
                           .finished();
    const AnalysisOperator op = AnalysisOperator::from_dictionary(d);
    EXPECT_TRUE(op.full_space);
    const SolveResult r = l1_analysis(a, op, y, 0.2, tight());
    ASSERT_TRUE(r.converged);
    const Matrix dpinv = d.completeOrthogonalDecomposition().pseudoInverse();
    EXPECT_NEAR((dpinv * r.solution).lpNorm<1>(), 0.3947773327677449, 1e-7);
    EXPECT_LT((r.solution - ref).norm(), 1e-5);
}

TEST(L1Analysis, RankDeficientDictionaryMatchesConicReference)
{
    const Matrix a = from_rows(3, 4, {-1.242, -1.904, -1.404, 0.048, 2.056, 1.154, 0.331, 1.558, -0.264, -0.043, -0.26,
                                      0.218});
    const Matrix d = from_rows(4, 3, {1, 2, 0, 2, 3, 1, 0, 1, -1, 1, 3, -1}); // rank 2
    const Vector y = (Vector(3) << -1.341, 1.9036, -0.029400000000000003).finished();
    const Vector ref =
        (Vector(4) << 0.29396086634069446, 0.4031026271606344, 0.18481910552075437, 0.47877997186144855).finished();
    const AnalysisOperator op = AnalysisOperator::from_dictionary(d);
    EXPECT_FALSE(op.full_space);
    EXPECT_FALSE(op.identity);
    EXPECT_EQ(op.basis.cols(), 2);
    const SolveResult r = l1_analysis(a, op, y, 0.04, tight());
    ASSERT_TRUE(r.converged);
    const Matrix dpinv = d.completeOrthogonalDecomposition().pseudoInverse();
    EXPECT_NEAR((dpinv * r.solution).lpNorm<1>(), 0.2211996924607342, 1e-7);
    EXPECT_LT((r.solution - ref).norm(), 1e-5);
}

// ---- l0 oracle ------------------------------------------------------------

TEST(L0Oracle, SingleColumn)
{
    const auto a = SensingMatrix::gaussian(5, 10, 2);
    const Vector y = a.entries().col(2); // e_3, 1-based
    EXPECT_EQ(support(l0_oracle(a, y, 0.0, 3).values()), std::vector<Index>{2});
}

TEST(L0Oracle, LargeNoiseGivesZero)
{
    const auto a = SensingMatrix::gaussian(5, 10, 2);
    const Vector y = Vector::Constant(5, 0.3);
    EXPECT_EQ(l0_oracle(a, y, y.norm(), 2).values(), Vector::Zero(10));
}

TEST(L0Oracle, AgreesWithBpdnOnTwoSparse)
{
    int agree = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto a = SensingMatrix::gaussian(8, 12, 500 + seed);
        Rng rng(seed);
        const Vector x = sparse_gaussian_vector(12, 2, rng);
        const Vector y = a.entries() * x;
        agree += support(l0_oracle(a, y, 0.0, 3).values()) == support(bpdn(a.entries(), y, 0.0).solution);
    }
    EXPECT_GE(agree, 18);
}

TEST(L0Oracle, CapsAndInfeasibility)
{
    const auto big = SensingMatrix::gaussian(5, 21, 1);
    EXPECT_THROW(l0_oracle(big, Vector::Ones(5), 0.0, 2), InvalidArgument);
    const auto a = SensingMatrix::gaussian(6, 10, 1);
    EXPECT_THROW(l0_oracle(a, Vector::Ones(6), 0.0, 5), InvalidArgument);
    EXPECT_THROW(l0_oracle(a, Vector::Ones(6), 0.0, 1), Error);
}
