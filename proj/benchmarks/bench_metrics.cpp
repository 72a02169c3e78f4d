#include <benchmark/benchmark.h>

#include <random>

#include "support.hpp"
#include "vinsp/louvain.hpp"
#include "vinsp/power_law.hpp"
#include "vinsp/structural.hpp"

using namespace vinsp;

namespace {

std::vector<std::uint64_t> power_law_sample(std::size_t n) {
    DiscretePowerLawSampler sampler(2.5, 1);
    std::mt19937_64 rng(3);
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = sampler(rng);
    return v;
}

// Sparse random DAG-like graph: edges only from higher to lower ids.
Digraph sparse_graph(std::size_t n, std::size_t avg_out) {
    std::mt19937_64 rng(5);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    std::vector<Edge> edges;
    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t u = 1; u < n; ++u)
        for (std::size_t k = 0; k < avg_out; ++k) {
            const NodeId v = static_cast<NodeId>(rng() % u);
            if (seen.emplace(NodeId(u), v).second) edges.push_back({NodeId(u), v, 1.0});
        }
    return Digraph(std::move(labels), std::move(edges));
}

void BM_PowerLawScan(benchmark::State& state) {
    const auto v = power_law_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto fit = fit_power_law(v, {.bootstraps = 0});
        benchmark::DoNotOptimize(fit.alpha);
    }
}
BENCHMARK(BM_PowerLawScan)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_PowerLawBootstrap(benchmark::State& state) {
    const auto v = power_law_sample(10'000);
    for (auto _ : state) {
        auto fit = fit_power_law(v, {.bootstraps = static_cast<std::size_t>(state.range(0)), .workers = 4});
        benchmark::DoNotOptimize(fit.p_value);
    }
}
BENCHMARK(BM_PowerLawBootstrap)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Louvain(benchmark::State& state) {
    const auto g = sparse_graph(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        auto p = louvain_communities(g);
        benchmark::DoNotOptimize(p.modularity);
    }
}
BENCHMARK(BM_Louvain)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_StructuralSummary(benchmark::State& state) {
    const auto g = sparse_graph(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        auto s = structural_summary(g, {.workers = 4});
        benchmark::DoNotOptimize(s.diameter);
    }
}
BENCHMARK(BM_StructuralSummary)->Arg(20'000)->Unit(benchmark::kMillisecond);

}  // namespace
