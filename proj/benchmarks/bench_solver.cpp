#include "mdgice/problems.hpp"
#include "mdgice/slab_solver.hpp"

#include <benchmark/benchmark.h>

using namespace mdg;

namespace {

ProblemSpec sod(int degree) {
    ProblemSpec spec = builtin("sod");
    spec.degree = degree;
    spec.init = InitMode::exact;
    return spec;
}

void BM_Residual(benchmark::State& state) {
    const ProblemSpec spec = sod(static_cast<int>(state.range(0)));
    const SpaceTimeResidual a = make_assembly(spec, build_mesh(spec));
    const Eigen::VectorXd u = initial_guess(spec, a);
    for (auto _ : state) benchmark::DoNotOptimize(a.residual(u));
    state.counters["unknowns"] = a.layout().size();
}
BENCHMARK(BM_Residual)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_SparseJacobian(benchmark::State& state) {
    const ProblemSpec spec = sod(static_cast<int>(state.range(0)));
    const SpaceTimeResidual a = make_assembly(spec, build_mesh(spec));
    const Eigen::VectorXd u = initial_guess(spec, a);
    for (auto _ : state) benchmark::DoNotOptimize(a.jacobian(u));
}
BENCHMARK(BM_SparseJacobian)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_DenseJacobian(benchmark::State& state) {
    const ProblemSpec spec = sod(static_cast<int>(state.range(0)));
    const SpaceTimeResidual a = make_assembly(spec, build_mesh(spec));
    const Eigen::VectorXd u = initial_guess(spec, a);
    for (auto _ : state) benchmark::DoNotOptimize(a.jacobian_dense(u));
}
BENCHMARK(BM_DenseJacobian)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_SolveLemma(benchmark::State& state) {
    ProblemSpec spec = builtin("lemma2_burgers");
    spec.degree = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_problem(spec));
}
BENCHMARK(BM_SolveLemma)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_SolveSod(benchmark::State& state) {
    const ProblemSpec spec = sod(static_cast<int>(state.range(0)));
    int iterations = 0;
    for (auto _ : state) {
        const RunOutcome run = run_problem(spec);
        iterations = run.iterations;
        benchmark::DoNotOptimize(run.converged);
    }
    state.counters["lm_iterations"] = iterations;
}
BENCHMARK(BM_SolveSod)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
