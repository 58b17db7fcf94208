#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "csflock/dynamics.hpp"
#include "csflock/errors.hpp"
#include "support/oracles.hpp"

namespace csflock::dynamics {
namespace {

using topology::Digraph;

Digraph leader_graph(std::size_t n, std::size_t leader) {
    Digraph g(n);
    for (std::size_t v = 0; v < n; ++v)
        if (v != leader) g.add_arc(leader, v);
    return g;
}

FlockState coincident(std::size_t n, std::size_t d) {
    return {0, Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)),
            Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d))};
}

TEST(Psi, Examples) {
    const Point a = Point::Zero(3);
    EXPECT_EQ(psi(a, a, 0.7), 1.0);
    Point b = Point::Zero(3);
    b(0) = 1.0;
    EXPECT_DOUBLE_EQ(psi(a, b, 1.0), 0.5);
    b(0) = 3.0;
    EXPECT_NEAR(psi(a, b, 0.25), 0.562341325190349080, 1e-15);
    EXPECT_EQ(psi(a, b, 0.0), 1.0);
}

TEST(Degrees, Examples) {
    const FlockParams p{0.2, 0.25, 3, 3};
    EXPECT_TRUE(degrees(coincident(3, 3), Digraph(3), p).isZero());
    EXPECT_TRUE(degrees(coincident(3, 3), Digraph::complete(3), p).isApprox(Vector::Constant(3, 2.0)));
    Vector expected(3);
    expected << 0.0, 1.0, 1.0;
    EXPECT_TRUE(degrees(coincident(3, 3), leader_graph(3, 0), p).isApprox(expected));
}

TEST(Degrees, DimensionMismatchThrows) {
    const FlockParams p{0.2, 0.25, 3, 3};
    EXPECT_THROW(degrees(coincident(3, 3), Digraph(4), p), DimensionError);
    EXPECT_THROW(degrees(coincident(3, 2), Digraph(3), p), DimensionError);
}

TEST(Laplacian, Examples) {
    const FlockParams p2{0.2, 0.25, 2, 1};
    EXPECT_TRUE(laplacian(coincident(2, 1), Digraph(2), p2).matrix.isZero());

    // Agent 2 influences agent 1.
    const Digraph g(2, {{1, 0}});
    const auto lap = laplacian(coincident(2, 1), g, p2);
    Matrix expected(2, 2);
    expected << 1.0, -1.0, 0.0, 0.0;
    EXPECT_TRUE(lap.matrix.isApprox(expected));
    EXPECT_TRUE(lap.support(0, 1));
    EXPECT_FALSE(lap.support(1, 0));
}

TEST(Laplacian, RowsSumToZero) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const FlockParams p{0.1, 0.5, n, 3};
        const auto g = testing::random_rooted_leadership(n, rng);
        const auto lap = laplacian(testing::random_state(n, 3, rng), g, p);
        ASSERT_LE(lap.matrix.rowwise().sum().cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(FlockingMatrix, Examples) {
    const FlockParams p2{0.2, 0.25, 2, 1};
    EXPECT_TRUE(flocking_matrix(laplacian(coincident(2, 1), Digraph(2), p2), 0.2)
                    .entries()
                    .isApprox(Matrix::Identity(2, 2)));
    const Digraph g(2, {{1, 0}});
    Matrix expected(2, 2);
    expected << 0.8, 0.2, 0.0, 1.0;
    const auto f = flocking_matrix(laplacian(coincident(2, 1), g, p2), 0.2);
    EXPECT_TRUE(f.entries().isApprox(expected, 1e-15));
    ASSERT_TRUE(f.support().has_value());
    EXPECT_TRUE((*f.support())(0, 0));
    EXPECT_TRUE((*f.support())(0, 1));
    EXPECT_FALSE((*f.support())(1, 0));
}

TEST(FlockingMatrix, DiagonalLowerBoundBelowStepLimit) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> frac(0.01, 0.999);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const double limit = 1.0 / (static_cast<double>(n) + 1.0);
        const FlockParams p{frac(rng) * limit, 0.3, n, 2};
        const auto g = testing::random_rooted_leadership(n, rng, 0.8);
        const auto f = flocking_matrix(laplacian(testing::random_state(n, 2, rng), g, p), p.h);
        ASSERT_GE(f.entries().diagonal().minCoeff(), limit);
    }
}

TEST(FlockingMatrix, TooLargeStepThrows) {
    const FlockParams p{0.6, 0.0, 3, 1};
    const auto lap = laplacian(coincident(3, 1), Digraph::complete(3), p);
    EXPECT_THROW(flocking_matrix(lap, 0.6), ParameterError);
}

TEST(Step, ConsensusIsFixedPoint) {
    std::mt19937_64 rng(25);
    const FlockParams p{0.2, 0.25, 4, 3};
    FlockState s = testing::random_state(4, 3, rng);
    for (Eigen::Index i = 1; i < 4; ++i) s.v.row(i) = s.v.row(0);
    const auto next = step(s, Digraph::complete(4), p);
    EXPECT_EQ(next.v, s.v);
    EXPECT_TRUE(next.x.isApprox(s.x + 0.2 * s.v));
    EXPECT_EQ(next.t, 1U);
}

TEST(Step, EmptyGraphKeepsVelocities) {
    std::mt19937_64 rng(27);
    const FlockParams p{0.2, 0.25, 3, 3};
    const FlockState s = testing::random_state(3, 3, rng);
    EXPECT_EQ(step(s, Digraph(3), p).v, s.v);
}

TEST(Step, TwoAgentExample) {
    const FlockParams p{0.2, 0.25, 2, 1};
    FlockState s = coincident(2, 1);
    s.v(0, 0) = 1.0;
    const auto next = step(s, Digraph(2, {{1, 0}}), p);
    EXPECT_NEAR(next.v(0, 0), 0.8, 1e-15);
    EXPECT_EQ(next.v(1, 0), 0.0);
    // Positions use the time-t velocity.
    EXPECT_NEAR(next.x(0, 0), 0.2, 1e-15);
}

TEST(Step, AllowsLargeStepForExploration) {
    const FlockParams p{0.9, 0.0, 3, 1};
    FlockState s = coincident(3, 1);
    s.v(1, 0) = 1.0;
    EXPECT_NO_THROW(step(s, Digraph::complete(3), p));
}

TEST(Step, VelocityUpdateIsFlockingMatrixAction) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const FlockParams p{0.9 / (static_cast<double>(n) + 1.0), 0.4, n, 3};
        const auto g = testing::random_rooted_leadership(n, rng);
        const FlockState s = testing::random_state(n, 3, rng);
        const auto f = flocking_matrix(laplacian(s, g, p), p.h);
        const Matrix expected = f.entries() * s.v;
        ASSERT_LE((step(s, g, p).v - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Step, FixedLeaderVelocityIsConstant) {
    std::mt19937_64 rng(31);
    const FlockParams p{0.15, 0.25, 4, 3};
    const auto g = leader_graph(4, 3);
    FlockState s = testing::random_state(4, 3, rng);
    const Point leader_v = s.v.row(3);
    for (int t = 0; t < 200; ++t) {
        s = step(s, g, p);
        ASSERT_EQ(Point(s.v.row(3)), leader_v);
    }
}

TEST(Step, TranslationEquivariance) {
    std::mt19937_64 rng(33);
    const FlockParams p{0.2, 0.25, 3, 3};
    const std::vector<Digraph> gs{leader_graph(3, 0), leader_graph(3, 1), leader_graph(3, 2)};
    FlockState a = testing::random_state(3, 3, rng);
    FlockState b = a;
    Point shift(3);
    shift << 3.5, -1.25, 7.0;
    b.x.rowwise() += shift;
    for (int t = 0; t < 100; ++t) {
        a = step(a, gs[t % 3], p);
        b = step(b, gs[t % 3], p);
    }
    Matrix shifted = a.x;
    shifted.rowwise() += shift;
    EXPECT_LE((b.x - shifted).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((b.v - a.v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Reference, Examples) {
    FlockState s = coincident(3, 3);
    const auto r0 = reference(s);
    EXPECT_TRUE(r0.xhat.isZero());
    EXPECT_TRUE(r0.vhat.isZero());
    EXPECT_EQ(r0.xhat.rows(), 2);

    FlockState two{0, Matrix(2, 1), Matrix(2, 1)};
    two.x << 1.0, 0.0;
    two.v << 2.0, 1.0;
    const auto r = reference(two);
    EXPECT_EQ(r.xhat(0, 0), 1.0);
    EXPECT_EQ(r.vhat(0, 0), 1.0);

    EXPECT_THROW(reference(coincident(1, 3)), InvariantError);
}

TEST(ReferenceTransition, Examples) {
    const FlockParams p{0.2, 0.25, 3, 3};
    EXPECT_TRUE(reference_transition(coincident(3, 3), Digraph(3), p).isApprox(Matrix::Identity(2, 2)));
    const Matrix p3 = reference_transition(coincident(3, 3), leader_graph(3, 2), p);
    EXPECT_TRUE(p3.isApprox(0.8 * Matrix::Identity(2, 2), 1e-15));
}

TEST(ReferenceTransition, NonnegativeWhenReferenceAgentLeads) {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const FlockParams p{0.9 / (static_cast<double>(n) + 1.0), 0.3, n, 2};
        // Relabel a random rooted-leadership graph so that its leader is agent N.
        const auto g = testing::random_rooted_leadership(n, rng);
        const auto leader = *topology::is_rooted_leadership(g).leader;
        Digraph h(n);
        auto relabel = [&](std::size_t v) { return v == leader ? n - 1 : (v == n - 1 ? leader : v); };
        for (const auto& a : g.arcs()) h.add_arc(relabel(a.from), relabel(a.to));
        ASSERT_GE(reference_transition(testing::random_state(n, 2, rng), h, p).minCoeff(), 0.0);
    }
}

TEST(ReferenceTransition, CanBeNegativeWhenLeaderAlternates) {
    const FlockParams p{0.2, 0.25, 3, 3};
    // Agent 2 leads: 2 -> 1 -> 3. The reference agent hears agent 1, which
    // agent 2 does not, giving P(2, 1) = -h.
    const Digraph g(3, {{1, 0}, {0, 2}});
    const Matrix pm = reference_transition(coincident(3, 3), g, p);
    EXPECT_NEAR(pm(1, 0), -0.2, 1e-15);
}

TEST(ReferenceTransition, ReferenceDynamicsIdentity) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const FlockParams p{0.9 / (static_cast<double>(n) + 1.0), 0.25 * (trial % 4), n, 3};
        const auto g = testing::random_rooted_leadership(n, rng);
        const FlockState s = testing::random_state(n, 3, rng);
        const auto before = reference(s);
        const auto after = reference(step(s, g, p));
        const Matrix pm = reference_transition(s, g, p);
        ASSERT_LE((after.xhat - (before.xhat + p.h * before.vhat)).cwiseAbs().maxCoeff(), 1e-12);
        ASSERT_LE((after.vhat - pm * before.vhat).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Psi, BoundedBelowByReferenceSpread) {
    std::mt19937_64 rng(39);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const double beta = 0.1 * (trial % 10);
        const FlockState s = testing::random_state(n, 3, rng);
        const double bound = reference(s).xhat.norm();
        const double lower = std::pow(1.0 + 2.0 * bound * bound, -beta);
        for (Eigen::Index i = 0; i < s.x.rows(); ++i)
            for (Eigen::Index j = 0; j < s.x.rows(); ++j) {
                const double w = psi(s.x.row(i), s.x.row(j), beta);
                ASSERT_LE(w, 1.0);
                ASSERT_GE(w, lower * (1.0 - 1e-14));
            }
    }
}

TEST(Validate, RejectsBadParameters) {
    EXPECT_THROW(validate({0.0, 0.25, 3, 3}), ParameterError);
    EXPECT_THROW(validate({0.1, -1.0, 3, 3}), ParameterError);
    EXPECT_THROW(validate({0.1, 0.25, 0, 3}), ParameterError);
    EXPECT_THROW(validate({0.1, 0.25, 3, 0}), ParameterError);
    EXPECT_NO_THROW(validate({0.1, 0.25, 3, 3}));
}

}  // namespace
}  // namespace csflock::dynamics
