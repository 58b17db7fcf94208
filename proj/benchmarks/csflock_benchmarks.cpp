#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "csflock/dynamics.hpp"
#include "csflock/stochastic.hpp"
#include "csflock/theory.hpp"
#include "csflock/topology.hpp"

namespace {

using namespace csflock;

dynamics::FlockState random_state(std::size_t n, std::size_t d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    dynamics::FlockState s;
    s.x = dynamics::Matrix::NullaryExpr(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d),
                                        [&] { return 10.0 * u(rng); });
    s.v = dynamics::Matrix::NullaryExpr(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d),
                                        [&] { return u(rng); });
    return s;
}

// Agent 0 leads everyone, so each step is a rooted-leadership step.
topology::Digraph star(std::size_t n) {
    topology::Digraph g(n);
    for (std::size_t v = 1; v < n; ++v) g.add_arc(0, v);
    return g;
}

void BM_Step(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    const dynamics::FlockParams p{0.5 / static_cast<double>(n + 1), 0.25, n, 3};
    const auto g = topology::Digraph::complete(n);
    auto s = random_state(n, 3, rng);
    for (auto _ : state) {
        s = dynamics::step(s, g, p);
        benchmark::DoNotOptimize(s.v.data());
    }
}
BENCHMARK(BM_Step)->Arg(3)->Arg(10)->Arg(50);

void BM_FlockingMatrixProduct(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    const dynamics::FlockParams p{0.5 / static_cast<double>(n + 1), 0.25, n, 3};
    const auto f = dynamics::flocking_matrix(dynamics::laplacian(random_state(n, 3, rng), star(n), p), p.h);
    const std::vector<stochastic::StochasticMatrix> seq(64, f);
    for (auto _ : state) benchmark::DoNotOptimize(stochastic::product_floor_limit(seq).product.entries().data());
}
BENCHMARK(BM_FlockingMatrixProduct)->Arg(3)->Arg(10)->Arg(30);

void BM_Certify(benchmark::State& state) {
    theory::CertificateInputs in;
    in.params = {0.2, 0.05, 3, 3};
    in.x0_hat_norm = 5.0;
    in.v0_norm = 1.0;
    in.v0_inf_norm = 0.7;
    in.lambda = theory::norm_equivalence_lambda(3, 3);
    for (auto _ : state) benchmark::DoNotOptimize(theory::certify(in).B0);
}
BENCHMARK(BM_Certify);

void BM_PositiveZero(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(theory::unique_positive_zero(2.5, 0.7, 40.0, 3.0));
}
BENCHMARK(BM_PositiveZero);

}  // namespace

BENCHMARK_MAIN();
