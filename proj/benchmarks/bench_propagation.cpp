#include <benchmark/benchmark.h>

#include "gralap/label_propagation.hpp"
#include "support/synthetic.hpp"

using namespace gralap;

namespace {

lp::LabeledDataset make_instance(int points_per_class) {
    testsupport::Rng rng(12345);
    return testsupport::make_clusters(rng, 5, points_per_class, 8, 20.0, 0.8).dataset;
}

} // namespace

static void BM_WeightMatrix(benchmark::State& state) {
    const lp::LabeledDataset ds = make_instance(static_cast<int>(state.range(0)));
    const double sigma = 1.0;
    for (auto _ : state) {
        Eigen::MatrixXd w = lp::build_weight_matrix(ds.points, sigma);
        benchmark::DoNotOptimize(w.data());
    }
    state.SetComplexityN(ds.points.rows());
}
BENCHMARK(BM_WeightMatrix)->Arg(16)->Arg(64)->Arg(128)->Complexity();

static void BM_Propagate(benchmark::State& state) {
    const lp::LabeledDataset ds = make_instance(static_cast<int>(state.range(0)));
    const lp::SigmaSelection sigma = lp::select_sigma(ds);
    const Eigen::MatrixXd transition =
        lp::build_transition_matrix(lp::build_weight_matrix(ds.points, sigma.sigma));
    for (auto _ : state) {
        lp::PropagationResult r = lp::propagate(transition, ds, {.tolerance = 1e-10});
        benchmark::DoNotOptimize(r.residual);
    }
    state.SetComplexityN(ds.points.rows());
}
BENCHMARK(BM_Propagate)->Arg(16)->Arg(64)->Arg(128)->Complexity();

static void BM_ClosedForm(benchmark::State& state) {
    const lp::LabeledDataset ds = make_instance(static_cast<int>(state.range(0)));
    const lp::SigmaSelection sigma = lp::select_sigma(ds);
    const Eigen::MatrixXd transition =
        lp::build_transition_matrix(lp::build_weight_matrix(ds.points, sigma.sigma));
    for (auto _ : state) {
        Eigen::MatrixXd yu = lp::solve_closed_form(transition, ds);
        benchmark::DoNotOptimize(yu.data());
    }
    state.SetComplexityN(ds.points.rows());
}
BENCHMARK(BM_ClosedForm)->Arg(16)->Arg(64)->Arg(128)->Complexity();

static void BM_SelectSigma(benchmark::State& state) {
    const lp::LabeledDataset ds = make_instance(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        lp::SigmaSelection s = lp::select_sigma(ds);
        benchmark::DoNotOptimize(s.sigma);
    }
    state.SetComplexityN(ds.points.rows());
}
BENCHMARK(BM_SelectSigma)->Arg(16)->Arg(64)->Arg(128)->Complexity();

BENCHMARK_MAIN();
