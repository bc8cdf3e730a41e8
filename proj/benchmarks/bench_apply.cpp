#include <benchmark/benchmark.h>

#include "triplespin/fwht.hpp"
#include "triplespin/linear_operator.hpp"
#include "triplespin/newton.hpp"
#include "triplespin/rng.hpp"

using namespace triplespin;

static void BM_fwht(benchmark::State& state) {
    const std::size_t n = state.range(0);
    Rng rng(1);
    std::vector<double> x(n);
    rng.fill_gaussian(x);
    for (auto _ : state) {
        fwht(x);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_fwht)->RangeMultiplier(2)->Range(1 << 9, 1 << 13)->Complexity();

template <Variant V>
static void BM_apply(benchmark::State& state) {
    const std::size_t n = state.range(0);
    auto op = LinearOperator::build(make_descriptor(V, n, n, 0, 42));
    Rng rng(2);
    std::vector<double> x(n), out(n);
    rng.fill_gaussian(x);
    for (auto _ : state) {
        op.apply(x, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_apply<Variant::gaussian_dense>)->RangeMultiplier(2)->Range(1 << 9, 1 << 12);
BENCHMARK(BM_apply<Variant::hd3hd2hd1>)->RangeMultiplier(2)->Range(1 << 9, 1 << 13);
BENCHMARK(BM_apply<Variant::hd_gauss_hd2hd1>)->RangeMultiplier(2)->Range(1 << 9, 1 << 13);
BENCHMARK(BM_apply<Variant::circ_d2_hd1>)->RangeMultiplier(2)->Range(1 << 9, 1 << 13);
BENCHMARK(BM_apply<Variant::skewcirc_d2_hd1>)->RangeMultiplier(2)->Range(1 << 9, 1 << 13);

static void BM_hessian_sketch_step(benchmark::State& state) {
    ProblemConfig cfg;
    cfg.n = 1 << state.range(0);
    cfg.d = 20;
    cfg.seed = 3;
    auto problem = make_logistic_problem(cfg);
    SketchConfig sketch;
    sketch.mode = SketchConfig::Mode::sketch;
    sketch.variant = Variant::hd3hd2hd1;
    sketch.m = 8 * cfg.d;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cfg.d);
    std::uint64_t t = 0;
    for (auto _ : state) {
        auto next = newton_sketch_step(problem, x, sketch, t++);
        benchmark::DoNotOptimize(next.data());
    }
}
BENCHMARK(BM_hessian_sketch_step)->DenseRange(9, 12, 1);

BENCHMARK_MAIN();
