#include <benchmark/benchmark.h>

#include <random>

#include "bsmf/graph.hpp"
#include "bsmf/interpolate.hpp"
#include "bsmf/pipeline.hpp"

using namespace bsmf;

namespace {

SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density,
                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<SparseEntry> entries;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (unit(rng) < density) entries.push_back({i, j, unit(rng)});
        }
    }
    return SparseMatrix::from_entries(rows, cols, std::move(entries));
}

Dataset synthetic_dataset(std::size_t messages_per_user) {
    SynthSpec spec;
    spec.messages_per_user = messages_per_user;
    spec.seed = 42;
    return generate(spec);
}

void BM_Spmm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_sparse(n, n, 0.05, 1);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DenseMatrix b(n, 8);
    for (double& v : b.data()) v = unit(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spmm(a, b));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spmm)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

void BM_Interpolate(benchmark::State& state) {
    const auto ds = synthetic_dataset(static_cast<std::size_t>(state.range(0)));
    Vocabulary vocab;
    const auto bows = build_bows(ds, vocab);
    const auto x = build_x(ds);
    const RbfParams rbf{1.5, 0.2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(interpolate(x, bows, rbf));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Interpolate)->Arg(5)->Arg(10)->Complexity();

void BM_BuildOperator(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SocialGraph g(random_sparse(n, n, 0.01, 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(PropagationOperator::build(g));
    }
}
BENCHMARK(BM_BuildOperator)->Arg(1000)->Arg(4000);

// Per-iteration factorization cost on dense inputs; claims double between
// the two args at fixed sources and K, so the pair shows the O(K|S||C|)
// per-iteration scaling of the solver itself.
void BM_FitIteration(benchmark::State& state) {
    const auto n_claims = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DenseMatrix xms(400, n_claims);
    for (double& v : xms.data()) v = unit(rng);
    const auto belief = BeliefMixture::star(4);
    FitConfig cfg;
    cfg.k = 4;
    cfg.max_iters = 10;
    cfg.tol = 1e-300;
    cfg.seed = 7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(xms, belief, cfg));
    }
    state.SetItemsProcessed(state.iterations() * 10);  // sweeps per fit call
}
BENCHMARK(BM_FitIteration)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
