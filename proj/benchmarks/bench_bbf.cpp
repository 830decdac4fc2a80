#include "bbf/baselines.hpp"
#include "bbf/bbf.hpp"
#include "bbf/cluster.hpp"
#include "bbf/data.hpp"
#include "bbf/random.hpp"
#include "bbf/rla.hpp"

#include <benchmark/benchmark.h>

using namespace bbf;

namespace {

constexpr double kSpread = 0.1;
constexpr double kBandwidth = 0.5;
constexpr Index kClusters = 15;
constexpr Index kRank = 20;

DataMatrix blobs(Index n) { return synth_blobs(n, 5, 10, kSpread, 6); }

BBFactorization fixed_build(const KernelMatrix& acc, const Clustering& c)
{
    const RankProfile p = fixed_rank_profile(c, kRank, 1e-2, estimate_frobenius(acc, 100 * acc.rows(), 2));
    return build_bbf(acc, c, p, 3);
}

void BM_KernelBlock(benchmark::State& state)
{
    const Index n = state.range(0);
    const DataMatrix X = blobs(n);
    const KernelMatrix acc(X, KernelSpec(KernelFamily::Gaussian, kBandwidth));
    IndexList idx(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        idx[static_cast<std::size_t>(i)] = i;
    for (auto _ : state)
        benchmark::DoNotOptimize(acc.block(idx, idx));
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_KernelBlock)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_KMeans(benchmark::State& state)
{
    const DataMatrix X = blobs(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(kmeans(X, kClusters, 1));
}
BENCHMARK(BM_KMeans)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_RandomizedSvd(benchmark::State& state)
{
    Rng rng(1);
    const Matrix A = rng.gaussian_matrix(state.range(0), 40) * rng.gaussian_matrix(40, state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(randomized_svd(A, kRank, 10, 2, 0));
}
BENCHMARK(BM_RandomizedSvd)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Build(benchmark::State& state)
{
    const DataMatrix X = blobs(state.range(0));
    const KernelMatrix acc(X, KernelSpec(KernelFamily::Gaussian, kBandwidth));
    const Clustering c = kmeans(X, kClusters, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(fixed_build(acc, c));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Build)->Arg(4000)->Arg(8000)->Arg(16000)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oN);

void BM_Apply(benchmark::State& state)
{
    const Index n = state.range(0);
    const DataMatrix X = blobs(n);
    const KernelMatrix acc(X, KernelSpec(KernelFamily::Gaussian, kBandwidth));
    const BBFactorization f = fixed_build(acc, kmeans(X, kClusters, 1));
    Rng rng(4);
    const Vector v = rng.gaussian_matrix(n, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(f.apply(v));
    state.SetComplexityN(n);
}
BENCHMARK(BM_Apply)->Arg(4000)->Arg(8000)->Arg(16000)->Arg(32000)->Unit(benchmark::kMicrosecond)->Complexity(benchmark::oN);

void BM_NystromUniform(benchmark::State& state)
{
    const DataMatrix X = blobs(state.range(0));
    const KernelMatrix acc(X, KernelSpec(KernelFamily::Gaussian, kBandwidth));
    for (auto _ : state)
        benchmark::DoNotOptimize(nystrom_uniform(acc, 100, 1));
}
BENCHMARK(BM_NystromUniform)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
