#include <benchmark/benchmark.h>

#include "flagcurv/flag_curvature.hpp"
#include "flagcurv/oracle.hpp"

using namespace flagcurv;

namespace {

struct Setup {
  ZermeloData Z;
  Immersion imm;
  Vec x, v, u, w;
};

Setup make(const char* preset, int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const Mat A = Mat::NullaryExpr(n, n, [&]() { return rng.uniform(-1.0, 1.0); });
  const Mat h = A * A.transpose() / n + 0.3 * Mat::Identity(n, n);
  const Vec W0 = rng.normal_vector(n);
  const ZermeloData Z = ZermeloData::make(h, W0 * (0.5 / norm_h(h, W0)));
  Immersion imm = make_preset(preset, Z);
  const int k = imm.param_dim();
  const Vec x = imm.sample_point(rng);
  return {Z, imm, x, rng.normal_vector(k), rng.normal_vector(k), rng.normal_vector(k)};
}

void BM_ZermeloNorm(benchmark::State& state) {
  const Setup s = make("quadric-r4", 4, 1);
  const Vec v = s.imm.jacobian(s.x) * s.v;
  for (auto _ : state) benchmark::DoNotOptimize(zermelo_norm(s.Z, v));
}
BENCHMARK(BM_ZermeloNorm);

void BM_FundamentalTensorMatrix(benchmark::State& state) {
  const Setup s = make("quadric-r4", 4, 2);
  const Vec v = s.imm.jacobian(s.x) * s.v;
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_tensor_matrix(s.Z, v));
}
BENCHMARK(BM_FundamentalTensorMatrix);

void BM_CartanTensor(benchmark::State& state) {
  const Setup s = make("quadric-r4", 4, 3);
  const Mat J = s.imm.jacobian(s.x);
  const Vec v = J * s.v, a = J * s.u, b = J * s.w;
  for (auto _ : state) benchmark::DoNotOptimize(cartan_tensor_full(s.Z, v, a, b, a));
}
BENCHMARK(BM_CartanTensor);

void BM_FlagContext(benchmark::State& state) {
  const Setup s = make("quadric-r4", 4, 4);
  for (auto _ : state) {
    FlagContext ctx(s.Z, s.imm, s.x, s.v);
    benchmark::DoNotOptimize(ctx.F());
  }
}
BENCHMARK(BM_FlagContext);

void BM_DifferenceTensorQ(benchmark::State& state) {
  const Setup s = make("quadric-r4", 4, 5);
  const FlagContext ctx(s.Z, s.imm, s.x, s.v);
  for (auto _ : state) benchmark::DoNotOptimize(ctx.Q(s.u, s.w));
}
BENCHMARK(BM_DifferenceTensorQ);

void BM_FlagCurvatureGeneral(benchmark::State& state, const char* preset, int n) {
  const Setup s = make(preset, n, 6);
  for (auto _ : state) benchmark::DoNotOptimize(flag_curvature_general(s.Z, s.imm, s.x, s.v, s.u));
}
BENCHMARK_CAPTURE(BM_FlagCurvatureGeneral, saddle, "saddle", 3);
BENCHMARK_CAPTURE(BM_FlagCurvatureGeneral, quadric_r4, "quadric-r4", 4);
BENCHMARK_CAPTURE(BM_FlagCurvatureGeneral, saddle_r4, "saddle-r4", 4);

void BM_FlagCurvatureHypersurface(benchmark::State& state) {
  const Setup s = make("quadric-r4", 4, 7);
  for (auto _ : state) benchmark::DoNotOptimize(flag_curvature_hypersurface(s.Z, s.imm, s.x, s.v, s.u));
}
BENCHMARK(BM_FlagCurvatureHypersurface);

void BM_IndicatrixClosedForm(benchmark::State& state) {
  const Setup s = make("indicatrix", 4, 8);
  const Mat J = s.imm.jacobian(s.x);
  const Vec p = s.imm.point(s.x), v = J * s.v, u = J * s.u;
  for (auto _ : state) benchmark::DoNotOptimize(indicatrix_flag_curvature(s.Z, p, v, u));
}
BENCHMARK(BM_IndicatrixClosedForm);

void BM_ScalarFlagCheck(benchmark::State& state) {
  const Setup s = make("cylinder-graph", 4, 9);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scalar_flag_check(s.Z, s.imm, s.x, s.v, m, 1));
  state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK(BM_ScalarFlagCheck)->Arg(16)->Arg(128);

void BM_OracleFlagCurvature(benchmark::State& state, const char* preset, int n) {
  const Setup s = make(preset, n, 10);
  const ChartFinsler cf = ChartFinsler::induced(s.Z, s.imm);
  for (auto _ : state) benchmark::DoNotOptimize(spray_flag_curvature(cf, s.x, s.v, s.u));
}
BENCHMARK_CAPTURE(BM_OracleFlagCurvature, saddle, "saddle", 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OracleFlagCurvature, quadric_r4, "quadric-r4", 4)->Unit(benchmark::kMillisecond);

void BM_OracleSpray(benchmark::State& state) {
  const Setup s = make("saddle", 3, 11);
  const ChartFinsler cf = ChartFinsler::induced(s.Z, s.imm);
  for (auto _ : state) benchmark::DoNotOptimize(spray_coefficients(cf, s.x, s.v));
}
BENCHMARK(BM_OracleSpray);

}  // namespace

BENCHMARK_MAIN();
