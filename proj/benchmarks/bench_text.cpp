#include <benchmark/benchmark.h>

#include <string>

#include "gralap/text.hpp"

using namespace gralap;

namespace {

const std::string kSentence =
    "Recent graph-based semi-supervised approaches propagate labels across "
    "similarity structures, significantly improving over weaker baselines.";

} // namespace

static void BM_TokenizeAndStem(benchmark::State& state) {
    for (auto _ : state) {
        auto stems = text::tokenize_and_stem(kSentence);
        benchmark::DoNotOptimize(stems.data());
    }
}
BENCHMARK(BM_TokenizeAndStem);

static void BM_PorterStem(benchmark::State& state) {
    for (auto _ : state) {
        std::string s = text::porter_stem("generalizations");
        benchmark::DoNotOptimize(s.data());
    }
}
BENCHMARK(BM_PorterStem);

static void BM_CosineSimilarity(benchmark::State& state) {
    text::TermVector a = text::term_vector(kSentence);
    text::TermVector b = text::term_vector(
        "Label propagation over weighted graphs has improved many recent "
        "baselines for semi-supervised prediction problems.");
    for (auto _ : state) {
        double c = text::cosine_similarity(a, b);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_CosineSimilarity);

BENCHMARK_MAIN();
