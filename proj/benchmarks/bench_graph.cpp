#include <benchmark/benchmark.h>

#include <numeric>

#include "support.hpp"
#include "vinsp/collection_graph.hpp"
#include "vinsp/nft_graph.hpp"
#include "vinsp/similarity.hpp"

using namespace vinsp;
using testing_support::make_synthetic;

namespace {

testing_support::Synthetic dataset(std::size_t n, std::size_t d) {
    testing_support::SyntheticSpec spec;
    spec.assets = n;
    spec.collections = 40;
    spec.dim = d;
    spec.noise = 1.2;
    spec.styles = 5;
    spec.tx_per_asset = 1;
    return make_synthetic(1, spec);
}

void BM_SimilarityTile(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto s = dataset(n, static_cast<std::size_t>(state.range(1)));
    std::vector<std::size_t> rows(s.store.rows());
    std::iota(rows.begin(), rows.end(), 0);
    const PackedEmbeddings packed(s.store, rows);
    for (auto _ : state) {
        double acc = 0.0;
        packed.tile(0, n, 0, n, true, [&](std::size_t, std::size_t, double v) { acc += v; });
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * (n - 1) / 2));
}
BENCHMARK(BM_SimilarityTile)->Args({1000, 64})->Args({2000, 768})->Unit(benchmark::kMillisecond);

void BM_BuildNftGraph(benchmark::State& state) {
    const auto s = dataset(static_cast<std::size_t>(state.range(0)), 64);
    const auto window = s.catalog.span();
    for (auto _ : state) {
        auto g = build_nft_graph(s.catalog, s.store, window, {.threshold = 0.5, .workers = static_cast<unsigned>(state.range(1))});
        benchmark::DoNotOptimize(g.graph.edge_count());
    }
}
BENCHMARK(BM_BuildNftGraph)->Args({5000, 1})->Args({5000, 4})->Unit(benchmark::kMillisecond);

void BM_BuildCollectionGraphs(benchmark::State& state) {
    const auto s = dataset(static_cast<std::size_t>(state.range(0)), 64);
    const auto window = s.catalog.span();
    for (auto _ : state) {
        auto gs = build_collection_graphs(s.catalog, s.store, window, {.threshold = 0.5, .workers = 4});
        benchmark::DoNotOptimize(gs[0].graph.edge_count());
    }
}
BENCHMARK(BM_BuildCollectionGraphs)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace
