#include <cmath>

#include <gtest/gtest.h>

#include "dlra/low_rank.hpp"
#include "dlra/retraction.hpp"
#include "support/properties.hpp"
#include "support/random.hpp"

namespace dlra {
namespace {

using testing::gaussian;
using testing::orthonormal;
using testing::random_state;
using testing::Rng;

Vector vec(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

// Orthogonal projection of z onto span{dU S V^T + U dS V^T + U S dV^T},
// computed from an explicit spanning set by least squares.
Matrix projection_by_basis(const LowRankState& y, const Matrix& z) {
    const Index m = y.rows(), n = y.cols(), r = y.rank();
    const Matrix& u = y.u();
    const Matrix& s = y.s();
    const Matrix& v = y.v();
    std::vector<Vector> span;
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < r; ++j) {
            Matrix du = Matrix::Zero(m, r);
            du(i, j) = 1.0;
            span.push_back(vec(du * s * v.transpose()));
        }
    }
    for (Index i = 0; i < r; ++i) {
        for (Index j = 0; j < r; ++j) {
            Matrix ds = Matrix::Zero(r, r);
            ds(i, j) = 1.0;
            span.push_back(vec(u * ds * v.transpose()));
        }
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < r; ++j) {
            Matrix dv = Matrix::Zero(n, r);
            dv(i, j) = 1.0;
            span.push_back(vec(u * s * dv.transpose()));
        }
    }
    Matrix basis(m * n, static_cast<Index>(span.size()));
    for (std::size_t k = 0; k < span.size(); ++k) {
        basis.col(static_cast<Index>(k)) = span[k];
    }
    const Vector coeffs = basis.completeOrthogonalDecomposition().solve(vec(z));
    const Vector projected = basis * coeffs;
    return Eigen::Map<const Matrix>(projected.data(), m, n);
}

TEST(Assemble, SingleEntry) {
    const LowRankState y(Matrix::Identity(3, 1), Matrix::Constant(1, 1, 2.0), Matrix::Identity(4, 1));
    Matrix expected = Matrix::Zero(3, 4);
    expected(0, 0) = 2.0;
    EXPECT_TRUE(assemble(y).isApprox(expected, 0.0));
}

TEST(Assemble, ZeroCore) {
    Rng rng(1);
    const LowRankState y(orthonormal(5, 2, rng), Matrix::Zero(2, 2), orthonormal(4, 2, rng));
    EXPECT_EQ(assemble(y).norm(), 0.0);
}

TEST(Assemble, RankIsBounded) {
    Rng rng(2);
    const LowRankState y = random_state(12, 9, 3, rng);
    const Vector sigma = singular_values(assemble(y));
    EXPECT_LT(tail_norm(sigma, 3), 1e-12 * sigma(0));
}

TEST(LowRankState, RejectsInconsistentFactors) {
    EXPECT_THROW(LowRankState(Matrix::Identity(3, 2), Matrix::Identity(3, 3), Matrix::Identity(3, 2)),
                 DimensionError);
    EXPECT_THROW(LowRankState(Matrix::Identity(2, 3), Matrix::Identity(3, 3), Matrix::Identity(4, 3)), RankError);
    EXPECT_THROW(LowRankState(Matrix(3, 0), Matrix(0, 0), Matrix(3, 0)), RankError);
    Matrix s = Matrix::Identity(2, 2);
    s(0, 1) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(LowRankState(Matrix::Identity(3, 2), s, Matrix::Identity(3, 2)), NonFiniteError);
}

TEST(LowRankState, DriftedFactorsAreReorthonormalized) {
    Rng rng(3);
    const Matrix u = orthonormal(10, 3, rng) + 1e-6 * gaussian(10, 3, rng);
    const Matrix v = orthonormal(8, 3, rng) + 1e-6 * gaussian(8, 3, rng);
    const Matrix s = gaussian(3, 3, rng);
    const Matrix product = u * s * v.transpose();
    const LowRankState y(u, s, v);
    EXPECT_LT(orthonormality_defect(y.u()), 1e-13);
    EXPECT_LT(orthonormality_defect(y.v()), 1e-13);
    EXPECT_LT((assemble(y) - product).norm(), 1e-13 * product.norm());
}

TEST(TruncateToRank, ExactForRankRInput) {
    Rng rng(4);
    const Matrix a = testing::random_rank(15, 11, 4, rng);
    EXPECT_LT((assemble(truncate_to_rank(a, 4)) - a).norm(), 1e-12 * a.norm());
}

TEST(TruncateToRank, DiagonalCase) {
    const Matrix a = Vector::LinSpaced(3, 3.0, 1.0).asDiagonal();
    const LowRankState y = truncate_to_rank(a, 2);
    EXPECT_NEAR((assemble(y) - a).norm(), 1.0, 1e-15);
    EXPECT_NEAR(y.s()(0, 0), 3.0, 1e-15);
    EXPECT_EQ(y.s()(0, 1), 0.0);
}

TEST(TruncateToRank, RankOutOfRange) {
    EXPECT_THROW(truncate_to_rank(Matrix::Identity(3, 4), 4), RankError);
    EXPECT_THROW(truncate_to_rank(Matrix::Identity(3, 4), 0), RankError);
}

TEST(TangentProject, StateIsTangentToItself) {
    Rng rng(5);
    const LowRankState y = random_state(9, 7, 3, rng);
    const Matrix z = assemble(y);
    EXPECT_LT((tangent_project(y, z) - z).norm(), 1e-13 * z.norm());
}

TEST(TangentProject, NormalSpaceMapsToZero) {
    Rng rng(6);
    const LowRankState y = random_state(9, 7, 3, rng);
    const Matrix pu = Matrix::Identity(9, 9) - y.u() * y.u().transpose();
    const Matrix pv = Matrix::Identity(7, 7) - y.v() * y.v().transpose();
    const Matrix z = pu * gaussian(9, 7, rng) * pv;
    EXPECT_LT(tangent_project(y, z).norm(), 1e-13);
}

TEST(TangentProject, MatchesExplicitTangentBasis) {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const LowRankState y = random_state(4, 5, 2, rng);
        const Matrix z = gaussian(4, 5, rng);
        EXPECT_LT((tangent_project(y, z) - projection_by_basis(y, z)).norm(), 1e-10);
    }
}

TEST(TangentProject, IdempotentAndOrthogonal) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const LowRankState y = random_state(14, 10, 4, rng);
        const Matrix z = gaussian(14, 10, rng);
        const Matrix w = gaussian(14, 10, rng);
        const Matrix pz = tangent_project(y, z);
        EXPECT_LT((tangent_project(y, pz) - pz).norm(), 1e-11);
        EXPECT_LT(std::abs(frobenius_inner(z - pz, tangent_project(y, w))), 1e-10 * z.norm() * w.norm());
    }
}

TEST(TangentProject, EachTermIsTangent) {
    Rng rng(9);
    const LowRankState y = random_state(11, 8, 3, rng);
    const Matrix z = gaussian(11, 8, rng);
    const Matrix vvt = y.v() * y.v().transpose();
    const Matrix uut = y.u() * y.u().transpose();
    for (const Matrix& term : {Matrix(z * vvt), Matrix(uut * z * vvt), Matrix(uut * z)}) {
        EXPECT_LT((tangent_project(y, term) - term).norm(), 1e-11);
    }
}

TEST(TangentProject, DimensionMismatch) {
    Rng rng(10);
    EXPECT_THROW(tangent_project(random_state(5, 4, 2, rng), Matrix::Zero(4, 5)), DimensionError);
}

TEST(IncreaseRank, SameRankIsIdentity) {
    Rng rng(11);
    const LowRankState y = random_state(6, 5, 2, rng);
    EXPECT_TRUE(assemble(increase_rank(y, 2)).isApprox(assemble(y), 0.0));
}

TEST(IncreaseRank, PadsCoreWithZeros) {
    const LowRankState y(Matrix::Identity(3, 1), Matrix::Constant(1, 1, 1.5), Matrix::Identity(3, 1));
    const LowRankState raised = increase_rank(y, 2);
    EXPECT_EQ(raised.rank(), 2);
    EXPECT_EQ(raised.s()(0, 0), 1.5);
    EXPECT_EQ(raised.s()(0, 1), 0.0);
    EXPECT_EQ(raised.s()(1, 0), 0.0);
    EXPECT_EQ(raised.s()(1, 1), 0.0);
    EXPECT_LT((assemble(raised) - assemble(y)).norm(), 1e-15);
    EXPECT_LT(orthonormality_defect(raised.u()), 1e-14);
}

TEST(IncreaseRank, PreservesAssembledMatrix) {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const LowRankState y = random_state(20, 15, 3, rng);
        const LowRankState raised = increase_rank(y, 7, 1000 + trial);
        const Matrix a = assemble(y);
        EXPECT_LT((assemble(raised) - a).norm(), 1e-13 * a.norm());
        EXPECT_LT(orthonormality_defect(raised.u()), 1e-11);
        EXPECT_LT(orthonormality_defect(raised.v()), 1e-11);
        EXPECT_LT((assemble(truncate_to_rank(assemble(raised), 3)) - a).norm(), 1e-12 * a.norm());
    }
}

TEST(IncreaseRank, DeterministicForSeed) {
    Rng rng(13);
    const LowRankState y = random_state(10, 9, 2, rng);
    EXPECT_TRUE(increase_rank(y, 4, 5).u().isApprox(increase_rank(y, 4, 5).u(), 0.0));
}

TEST(IncreaseRank, Errors) {
    Rng rng(14);
    const LowRankState y = random_state(5, 4, 2, rng);
    EXPECT_THROW(increase_rank(y, 5), RankError);
    EXPECT_THROW(increase_rank(y, 1), RankError);
}

TEST(DecreaseRank, ReportsDiscardedWeight) {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 2.0;
    s(1, 1) = 1e-16;
    const LowRankState y(Matrix::Identity(4, 2), s, Matrix::Identity(3, 2));
    const auto [lowered, report] = decrease_rank(y, 1);
    EXPECT_EQ(report.old_rank, 2);
    EXPECT_EQ(report.new_rank, 1);
    EXPECT_NEAR(report.discarded_weight, 1e-16, 1e-30);
    EXPECT_NEAR(lowered.s()(0, 0), 2.0, 1e-15);
}

TEST(DecreaseRank, DroppingZeroSingularValuesIsExact) {
    Rng rng(15);
    const LowRankState low = random_state(12, 10, 3, rng);
    const LowRankState raised = increase_rank(low, 6);
    const auto [back, report] = decrease_rank(raised, 3);
    EXPECT_LT((assemble(back) - assemble(low)).norm(), 1e-13 * assemble(low).norm());
    EXPECT_LT(report.discarded_weight, 1e-13);
}

TEST(DecreaseRank, EqualsTruncatedSvdOfAssembly) {
    Rng rng(16);
    for (int trial = 0; trial < 10; ++trial) {
        const LowRankState y = random_state(15, 12, 5, rng);
        const auto [lowered, report] = decrease_rank(y, 2);
        const Matrix a = assemble(y);
        EXPECT_LT((assemble(lowered) - assemble(truncate_to_rank(a, 2))).norm(), 1e-12 * a.norm());
        EXPECT_NEAR(report.discarded_weight, (a - assemble(lowered)).norm(), 1e-12 * a.norm());
    }
}

TEST(DecreaseRank, Errors) {
    Rng rng(17);
    const LowRankState y = random_state(5, 4, 2, rng);
    EXPECT_THROW(decrease_rank(y, 0), RankError);
    EXPECT_THROW(decrease_rank(y, 3), RankError);
}

TEST(Retract, ZeroDirection) {
    Rng rng(18);
    const LowRankState y = random_state(10, 8, 3, rng);
    EXPECT_LT((assemble(retract(y, Matrix::Zero(10, 8))) - assemble(y)).norm(), 1e-14 * assemble(y).norm());
}

TEST(Retract, ExactWhenTargetHasRankR) {
    Rng rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = testing::random_rank(10, 8, 3, rng);
        const Matrix b = testing::random_rank(10, 8, 3, rng);
        const LowRankState y = truncate_to_rank(a, 3);
        EXPECT_LT((assemble(retract(y, b - a)) - b).norm(), 1e-10 * b.norm());
    }
}

TEST(Retract, FirstOrderAgreementWithTangentStep) {
    Rng rng(20);
    const LowRankState y = random_state(12, 10, 3, rng);
    const Matrix d = gaussian(12, 10, rng);
    const std::vector<double> ts{1e-2, 1e-3, 1e-4, 1e-5};
    EXPECT_GE(testing::loglog_slope(ts, testing::retraction_defects(y, d, ts)), 1.9);
}

} // namespace
} // namespace dlra
