#include <benchmark/benchmark.h>

#include <random>

#include "graftlab/flat_surfaces.hpp"
#include "graftlab/grafting.hpp"
#include "graftlab/qc_comparison.hpp"
#include "graftlab/schwarzian_dev.hpp"
#include "graftlab/torus_oracle.hpp"
#include "graftlab/traintracks.hpp"

using namespace graftlab;

namespace {

Point2 pt(QuadNumber x, QuadNumber y) { return {std::move(x), std::move(y)}; }

HalfTranslationSurface l_shape() {
  SurfaceInput in;
  in.polygons = {{pt(0, 0), pt(1, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2), pt(0, 1)}};
  in.gluings = {{{0, 0}, {0, 5}, GluingKind::translation},
                {{0, 1}, {0, 3}, GluingKind::translation},
                {{0, 2}, {0, 7}, GluingKind::translation},
                {{0, 4}, {0, 6}, GluingKind::translation}};
  return build_surface(in);
}

Point2 golden() { return pt((QuadNumber::sqrt_of(5) - QuadNumber(1)) / QuadNumber(2), 1); }

TrainTrack nine_branch() {
  return TrainTrack(9, {{0, {1, 2}}, {3, {1, 2}}, {4, {0, 5}}, {6, {3, 5}}, {7, {4, 8}}, {7, {6, 8}}});
}

}  // namespace

static void BM_IntegralApproximation(benchmark::State& state) {
  const TrainTrack t = nine_branch();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> num(1, 60), den(1, 12);
  std::vector<WeightVector> ws;
  while (ws.size() < 64) {
    WeightVector f;
    for (std::size_t i = 0; i < free_branches(t).size(); ++i) f.push_back(Rational(num(rng), den(rng)));
    WeightVector w = complete_balanced(t, f);
    bool pos = true;
    for (const auto& x : w) pos = pos && x > 0;
    if (pos) ws.push_back(w);
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(integral_approximation(t, ws[i++ % ws.size()]));
}
BENCHMARK(BM_IntegralApproximation);

static void BM_Decomposition(benchmark::State& state) {
  const HalfTranslationSurface s = l_shape();
  for (auto _ : state) benchmark::DoNotOptimize(traintrack_decomposition(s, golden(), QuadNumber(Rational(2, 3))));
}
BENCHMARK(BM_Decomposition)->Unit(benchmark::kMillisecond);

static void BM_Split(benchmark::State& state) {
  const auto d = traintrack_decomposition(l_shape(), golden(), QuadNumber(Rational(2, 3)));
  for (auto _ : state) benchmark::DoNotOptimize(split(d));
}
BENCHMARK(BM_Split)->Unit(benchmark::kMillisecond);

static void BM_ModelCompare(benchmark::State& state) {
  const double R = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(model_compare(R, AntiStokesSector{0}, 0));
}
BENCHMARK(BM_ModelCompare)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_TwoPiHolonomy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(two_pi_graft_holonomy(1.0, 2));
}
BENCHMARK(BM_TwoPiHolonomy)->Unit(benchmark::kMicrosecond);

static void BM_GraftSurface(benchmark::State& state) {
  const FuchsianSurface s = regular_octagon_surface();
  const std::vector<GraftLoop> loops{{"a", Weight{Rational(1), true}}, {"BcdAdAdAB", Weight{Rational(2), true}}};
  for (auto _ : state) benchmark::DoNotOptimize(graft_surface(s, loops));
}
BENCHMARK(BM_GraftSurface);

static void BM_Straighten(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HypRectangle r = build_hyp_rectangle(HPoint::make(0.0, 1.0), 1.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(dilatation(straighten_rectangle(r, 1.0, n)));
}
BENCHMARK(BM_Straighten)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_TorusRayGap(benchmark::State& state) {
  const TorusPoint t = TorusPoint::make({0.3, 1.0});
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ray_gap(t, {2, 1}, s));
    s = s > 6.0 ? 0.0 : s + 0.01;
  }
}
BENCHMARK(BM_TorusRayGap);
BENCHMARK_MAIN();
