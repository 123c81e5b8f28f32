#include <benchmark/benchmark.h>

#include <memory>

#include "galbrun/forms.hpp"
#include "galbrun/mesh.hpp"
#include "galbrun/methods.hpp"
#include "galbrun/problems.hpp"
#include "galbrun/quadrature.hpp"
#include "galbrun/study.hpp"

namespace {

using namespace galbrun;

std::shared_ptr<const Mesh> disc_mesh(int level, int p) {
  return std::make_shared<const Mesh>(make_unit_disc_mesh(level, default_geom_order(p)));
}

// Args: method index, level, p.
void BM_Assemble(benchmark::State& state) {
  const Method m = kAllMethods[static_cast<std::size_t>(state.range(0))];
  const int level = static_cast<int>(state.range(1));
  const int p = static_cast<int>(state.range(2));
  const auto mesh = disc_mesh(level, p);
  const ManufacturedProblem pr = convergence_problem(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_method(m, mesh, p, pr.coefficients, pr.forcing));
  }
  state.SetLabel(std::string(method_name(m)));
}

void BM_Solve(benchmark::State& state) {
  const Method m = kAllMethods[static_cast<std::size_t>(state.range(0))];
  const int level = static_cast<int>(state.range(1));
  const int p = static_cast<int>(state.range(2));
  const auto mesh = disc_mesh(level, p);
  const ManufacturedProblem pr = convergence_problem(p);
  const Discretization d = assemble_method(m, mesh, p, pr.coefficients, pr.forcing);
  for (auto _ : state) benchmark::DoNotOptimize(solve_method(d));
  state.counters["ndof"] = static_cast<double>(d.system.matrix.rows());
  state.SetLabel(std::string(method_name(m)));
}

void BM_TriangleRule(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(triangle_rule(static_cast<int>(state.range(0))));
}

void BM_RefineDisc(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(make_unit_disc_mesh(static_cast<int>(state.range(0)), 3));
}

void method_args(benchmark::internal::Benchmark* b) {
  for (int m = 0; m < 4; ++m) {
    for (int level : {2, 3}) b->Args({m, level, 2});
  }
}

}  // namespace

BENCHMARK(BM_Assemble)->Apply(method_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->Apply(method_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TriangleRule)->Arg(10)->Arg(40);
BENCHMARK(BM_RefineDisc)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
