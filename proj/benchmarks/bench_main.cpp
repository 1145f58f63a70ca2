#include <benchmark/benchmark.h>

#include "trispec/eigensolver.hpp"
#include "trispec/metrics.hpp"

using namespace trispec;

namespace {

void BM_GenerateMesh(benchmark::State& state) {
    const RightTriangle tri = RightTriangle::with_leg(0.99);
    const int ndiv = static_cast<int>(state.range(0));
    for (auto _ : state) {
        Mesh mesh = Mesh::structured(tri, ndiv);
        benchmark::DoNotOptimize(mesh.nodes().data());
    }
    state.SetComplexityN(ndiv);
}
BENCHMARK(BM_GenerateMesh)->Arg(16)->Arg(64)->Arg(128)->Complexity(benchmark::oNSquared);

void BM_Assemble(benchmark::State& state) {
    const Mesh mesh = Mesh::structured(RightTriangle::with_leg(0.99),
                                       static_cast<int>(state.range(0)));
    const int order = static_cast<int>(state.range(1));
    for (auto _ : state) {
        Assembled sys = assemble(mesh, order);
        benchmark::DoNotOptimize(sys.K.valuePtr());
    }
}
BENCHMARK(BM_Assemble)->Args({32, 1})->Args({32, 2})->Args({64, 2});

void BM_SolveEigs(benchmark::State& state) {
    const Mesh mesh = Mesh::structured(RightTriangle::with_leg(0.99),
                                       static_cast<int>(state.range(0)));
    const Assembled sys = assemble(mesh, 2);
    const Reduced red = reduce_dirichlet(sys);
    const int count = static_cast<int>(state.range(1));
    for (auto _ : state) {
        auto pairs = solve_eigs(red.K, red.M, count);
        benchmark::DoNotOptimize(pairs.data());
    }
}
BENCHMARK(BM_SolveEigs)->Args({16, 10})->Args({32, 25})->Unit(benchmark::kMillisecond);

void BM_AnalyticProportion(benchmark::State& state) {
    const EigenFunction u(
        AnalyticFunction::from_mode(ModeIndex::canonical(20, 21)));
    for (auto _ : state) {
        const double p = prop_left(u);
        benchmark::DoNotOptimize(p);
    }
    state.SetLabel("quadrature path");
}
BENCHMARK(BM_AnalyticProportion)->Unit(benchmark::kMicrosecond);

void BM_FemSideIntegral(benchmark::State& state) {
    Mesh mesh = Mesh::structured(RightTriangle::with_leg(0.99), 32);
    Assembled sys = assemble(mesh, 2);
    Reduced red = reduce_dirichlet(sys);
    auto pairs = solve_eigs(red.K, red.M, 1);
    auto system = std::make_shared<FemSystem>(std::move(mesh), std::move(sys.space),
                                             std::move(sys.K), std::move(sys.M));
    const EigenFunction u(FemFunction::from_pair(system, pairs[0]));
    for (auto _ : state) {
        const double s = side_neumann(u, SideTag::F3);
        benchmark::DoNotOptimize(s);
    }
    state.SetLabel("edge trace, Gauss-4");
}
BENCHMARK(BM_FemSideIntegral)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
