#include <benchmark/benchmark.h>

#include "gralap/metrics.hpp"
#include "support/synthetic.hpp"

using namespace gralap;

namespace {

corpus::CitationGraph random_graph(int nodes, int edges_per_node, bool weighted) {
    testsupport::Rng rng(777);
    corpus::CitationGraph g;
    for (int i = 0; i < nodes; ++i) {
        g.index.emplace("n" + std::to_string(i), i);
        g.nodes.push_back("n" + std::to_string(i));
    }
    for (int i = 0; i < nodes; ++i) {
        for (int e = 0; e < edges_per_node; ++e) {
            const int target = rng.uniform_int(0, nodes - 1);
            if (target == i) continue;
            g.edges.push_back(
                {i, target,
                 weighted ? std::optional<double>(rng.uniform(1.0, 5.0)) : std::nullopt});
        }
    }
    return g;
}

} // namespace

static void BM_PageRank(benchmark::State& state) {
    const corpus::CitationGraph g =
        random_graph(static_cast<int>(state.range(0)), 6, false);
    for (auto _ : state) {
        metrics::ScoreTable t = metrics::pagerank(g);
        benchmark::DoNotOptimize(t.scores.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PageRank)->Arg(1000)->Arg(10000)->Complexity();

static void BM_WeightedPageRank(benchmark::State& state) {
    const corpus::CitationGraph g =
        random_graph(static_cast<int>(state.range(0)), 6, true);
    metrics::PageRankOptions opts;
    opts.weighted = true;
    for (auto _ : state) {
        metrics::ScoreTable t = metrics::pagerank(g, opts);
        benchmark::DoNotOptimize(t.scores.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightedPageRank)->Arg(1000)->Arg(10000)->Complexity();

static void BM_InfCite(benchmark::State& state) {
    const corpus::CitationGraph g =
        random_graph(static_cast<int>(state.range(0)), 6, true);
    for (auto _ : state) {
        metrics::ScoreTable t = metrics::inf_cite(g);
        benchmark::DoNotOptimize(t.scores.data());
    }
}
BENCHMARK(BM_InfCite)->Arg(10000);

BENCHMARK_MAIN();
