#include <benchmark/benchmark.h>

#include "orbitflow/devmap.hpp"
#include "orbitflow/fixtures.hpp"
#include "orbitflow/solitons.hpp"

using namespace orbitflow;

namespace {

const LineGrid kGrid{20.0, 1024};

HierarchyContext nls_ctx() { return make_context(fixtures::su2_a(), 2); }

HierarchyContext nwave_ctx() {
  return HierarchyContext(fixtures::un_diag({1.0, 2.0, 3.0}),
                          fixtures::un_diag({0.7, -1.1, 0.4}), 1);
}

void BM_bracket_u3(benchmark::State& state) {
  AlgebraElement a = fixtures::un_diag({1.0, 2.0, 3.0});
  CentralizerData cd(a);
  Field u = fixtures::perp_bumps(cd, kGrid, 0.3, 1);
  const Mat& x = u.values[100];
  const Mat& y = u.values[200];
  for (auto _ : state) benchmark::DoNotOptimize(bracket_m(x, y));
}
BENCHMARK(BM_bracket_u3);

void BM_centralizer_build(benchmark::State& state) {
  AlgebraElement a = fixtures::un_diag({1.0, 2.0, 3.0});
  for (auto _ : state) benchmark::DoNotOptimize(CentralizerData(a).centralizer_dim());
}
BENCHMARK(BM_centralizer_build);

void BM_derivative(benchmark::State& state) {
  Field u = fixtures::su2_sech(kGrid, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(derivative(u, 1).size());
}
BENCHMARK(BM_derivative);

void BM_q_sequence(benchmark::State& state) {
  HierarchyContext ctx = nls_ctx();
  Field u = fixtures::su2_sech(kGrid, 0.6);
  for (auto _ : state)
    benchmark::DoNotOptimize(q_sequence(ctx, u, static_cast<int>(state.range(0))).q.size());
}
BENCHMARK(BM_q_sequence)->Arg(3)->Arg(6);

void BM_flow_rhs(benchmark::State& state) {
  HierarchyContext ctx = nls_ctx();
  Field u = fixtures::su2_sech(kGrid, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(flow_rhs(ctx, u).size());
}
BENCHMARK(BM_flow_rhs);

void BM_solve_frame(benchmark::State& state) {
  Field u = fixtures::su2_sech(kGrid, 0.6);
  GroupElement id = identity_element(u.tag);
  for (auto _ : state) benchmark::DoNotOptimize(solve_frame(u, id).size());
}
BENCHMARK(BM_solve_frame);

void BM_develop(benchmark::State& state) {
  HierarchyContext ctx = nls_ctx();
  Field u = fixtures::su2_sech(kGrid, 0.6);
  Curve gamma = undevelop(ctx, u).gamma;
  for (auto _ : state) benchmark::DoNotOptimize(develop(ctx, gamma).u.size());
}
BENCHMARK(BM_develop);

void BM_curve_flow_rhs(benchmark::State& state) {
  HierarchyContext ctx = nwave_ctx();
  Field u = fixtures::perp_bumps(ctx.cd, kGrid, 0.2, 5);
  DevelopedPair pair = undevelop(ctx, u);
  for (auto _ : state)
    benchmark::DoNotOptimize(curve_flow_rhs(ctx, pair, false).size());
}
BENCHMARK(BM_curve_flow_rhs);

void BM_soliton_eval(benchmark::State& state) {
  HierarchyContext ctx = nls_ctx();
  Mat V(2, 1);
  V << Complex(1, 0), Complex(1, 0);
  V /= std::sqrt(2.0);
  SolitonSolution one = backlund(ctx, vacuum_solution(ctx), {Complex(0, 0.75), V}, false);
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(one.u(x, 0.2));
    x += 1e-3;
  }
}
BENCHMARK(BM_soliton_eval);

}  // namespace

BENCHMARK_MAIN();
