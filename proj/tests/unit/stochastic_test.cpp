#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "csflock/dynamics.hpp"
#include "csflock/errors.hpp"
#include "csflock/stochastic.hpp"
#include "support/oracles.hpp"

namespace csflock::stochastic {
namespace {

Matrix two_by_two() {
    Matrix m(2, 2);
    m << 0.7, 0.3, 0.4, 0.6;
    return m;
}

TEST(StochasticMatrix, ValidatesEntriesAndRowSums) {
    Matrix neg(2, 2);
    neg << 1.1, -0.1, 0.5, 0.5;
    EXPECT_THROW(StochasticMatrix{neg}, InvariantError);
    Matrix off(2, 2);
    off << 0.5, 0.5, 0.5, 0.6;
    EXPECT_THROW(StochasticMatrix{off}, InvariantError);
    EXPECT_THROW(StochasticMatrix{Matrix::Constant(2, 3, 1.0 / 3.0)}, DimensionError);
    Matrix nearly = Matrix::Identity(2, 2);
    nearly(0, 0) += 5e-13;
    EXPECT_NO_THROW(StochasticMatrix{nearly});
}

TEST(FloorVector, Examples) {
    EXPECT_TRUE(floor_vector(StochasticMatrix::identity(2)).isApprox(RowVector::Zero(2)));
    const StochasticMatrix uniform(Matrix::Constant(4, 4, 0.25));
    EXPECT_TRUE(floor_vector(uniform).isApprox(RowVector::Constant(4, 0.25)));
    const RowVector fl = floor_vector(StochasticMatrix(two_by_two()));
    EXPECT_DOUBLE_EQ(fl(0), 0.4);
    EXPECT_DOUBLE_EQ(fl(1), 0.3);
}

TEST(Bracket, Examples) {
    const auto id = StochasticMatrix::identity(2);
    EXPECT_TRUE(bracket(id).isApprox(Matrix::Identity(2, 2)));
    EXPECT_DOUBLE_EQ(inf_norm(bracket(id)), 1.0);

    const StochasticMatrix uniform(Matrix::Constant(3, 3, 1.0 / 3.0));
    EXPECT_DOUBLE_EQ(inf_norm(bracket(uniform)), 0.0);

    const Matrix br = bracket(StochasticMatrix(two_by_two()));
    Matrix expected(2, 2);
    expected << 0.3, 0.0, 0.0, 0.3;
    EXPECT_TRUE(br.isApprox(expected, 1e-15));
    EXPECT_NEAR(inf_norm(br), 0.3, 1e-15);
}

TEST(InfNorm, Examples) {
    EXPECT_EQ(inf_norm(Matrix::Zero(3, 3)), 0.0);
    EXPECT_EQ(inf_norm(Matrix::Identity(3, 3)), 1.0);
    Matrix m(2, 2);
    m << 1.0, -2.0, 0.5, 0.5;
    EXPECT_EQ(inf_norm(m), 3.0);
    EXPECT_EQ(inf_norm(Matrix::Ones(2, 5)), 5.0);
}

TEST(Bracket, NormIdentityOnRandomMatrices) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const StochasticMatrix f(testing::random_stochastic(2 + trial % 5, rng));
        const Matrix br = bracket(f);
        ASSERT_GE(br.minCoeff(), 0.0);
        ASSERT_NEAR(inf_norm(br), 1.0 - floor_vector(f).sum(), 1e-12);
    }
}

TEST(ProductFloorLimit, IdentitiesAndSingleMatrix) {
    std::vector<StochasticMatrix> ids(5, StochasticMatrix::identity(3));
    const auto tr = product_floor_limit(ids);
    EXPECT_TRUE(tr.product.entries().isApprox(Matrix::Identity(3, 3)));
    ASSERT_EQ(tr.floor_trace.size(), 5U);
    for (const auto& fl : tr.floor_trace) EXPECT_TRUE(fl.isZero());

    const std::vector<StochasticMatrix> one{StochasticMatrix(two_by_two())};
    const auto single = product_floor_limit(one);
    ASSERT_EQ(single.floor_trace.size(), 1U);
    EXPECT_TRUE(single.floor_trace[0].isApprox(floor_vector(one[0])));
}

TEST(ProductFloorLimit, OrderIsLaterTimesEarlier) {
    std::mt19937_64 rng(5);
    const StochasticMatrix f1(testing::random_stochastic(3, rng));
    const StochasticMatrix f2(testing::random_stochastic(3, rng));
    const std::vector<StochasticMatrix> seq{f1, f2};
    const auto tr = product_floor_limit(seq);
    EXPECT_TRUE(tr.product.entries().isApprox(f2.entries() * f1.entries(), 1e-14));
}

TEST(ProductFloorLimit, TraceIsNondecreasingAndProductsStayStochastic) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 2 + trial % 5;
        std::vector<StochasticMatrix> seq;
        for (int k = 0; k < 50; ++k) seq.emplace_back(testing::random_stochastic(n, rng));
        const auto tr = product_floor_limit(seq);
        for (std::size_t k = 1; k < tr.floor_trace.size(); ++k)
            ASSERT_TRUE(((tr.floor_trace[k] - tr.floor_trace[k - 1]).array() >= -1e-15).all());
        ASSERT_LE((tr.product.entries().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
        ASSERT_LE(tr.floor_trace.back().sum(), 1.0 + 1e-12);
    }
}

TEST(ProductFloorLimit, DimensionMismatchThrows) {
    const std::vector<StochasticMatrix> seq{StochasticMatrix::identity(2), StochasticMatrix::identity(3)};
    EXPECT_THROW(product_floor_limit(seq), DimensionError);
    EXPECT_THROW(product_floor_limit(std::span<const StochasticMatrix>{}), InvariantError);
}

TEST(SubMultiplicativity, RandomPairs) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 2000; ++trial) {
        const Eigen::Index n = 2 + trial % 5;
        const StochasticMatrix f1(testing::random_stochastic(n, rng));
        const StochasticMatrix f2(testing::random_stochastic(n, rng));
        const Matrix lhs = bracket(multiply(f2, f1));
        const Matrix rhs = bracket(f2) * bracket(f1);
        ASSERT_LE((lhs - rhs).maxCoeff(), 1e-10);
    }
}

TEST(StronglyRootedMatrix, Examples) {
    EXPECT_FALSE(is_strongly_rooted(StochasticMatrix::identity(3)));
    Matrix m(3, 3);
    m << 0.5, 0.5, 0.0, 0.2, 0.8, 0.0, 0.1, 0.0, 0.9;
    EXPECT_TRUE(is_strongly_rooted(StochasticMatrix(m)));
}

TEST(StronglyRootedMatrix, LeaderGraphFlockingMatrix) {
    const topology::Digraph g1(3, {{0, 1}, {0, 2}});
    dynamics::FlockState s{0, Matrix::Zero(3, 3), Matrix::Zero(3, 3)};
    const dynamics::FlockParams p{0.2, 0.25, 3, 3};
    const auto f = dynamics::flocking_matrix(dynamics::laplacian(s, g1, p), p.h);
    EXPECT_TRUE(is_strongly_rooted(f));
    EXPECT_TRUE((f.entries().col(0).array() > 0.0).all());
}

// Structural support wins over magnitudes: an underflowed entry that is
// positive by construction still counts.
TEST(StronglyRootedMatrix, StructuralSupportOverridesThreshold) {
    Matrix m(2, 2);
    m << 1.0, 0.0, 1e-300, 1.0 - 1e-300;
    Support s(2, 2);
    s << true, false, true, true;
    EXPECT_FALSE(is_strongly_rooted(StochasticMatrix(m)));
    EXPECT_TRUE(is_strongly_rooted(StochasticMatrix(m, s)));
}

}  // namespace
}  // namespace csflock::stochastic
