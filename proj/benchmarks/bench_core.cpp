#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gridwatch/anomaly.hpp"
#include "gridwatch/classify/evaluate.hpp"
#include "gridwatch/cluster.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/ingest.hpp"
#include "gridwatch/rng.hpp"

namespace gw = gridwatch;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  auto rng = gw::stream_for(seed, 0);
  std::normal_distribution<double> d(60.0, 0.01);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

const gw::LabeledDataset& features() {
  static const auto d = [] {
    gw::CorpusSpec spec;
    spec.n_stations = 40;
    spec.class_counts.fill(40);
    return gw::featurize(gw::to_dataset(gw::generate_corpus(spec)), {});
  }();
  return d;
}

}  // namespace

// one station, whole series through the online detector
static void BM_DetectorFeed(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    gw::DetectorConfig c;
    c.freeze_on_trigger = false;
    gw::Detector d(c);
    for (double v : x) benchmark::DoNotOptimize(d.feed(v));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectorFeed)->Arg(1802)->Arg(3000)->Arg(100000);

static void BM_Acf(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(gw::extract(x));
}
BENCHMARK(BM_Acf)->Arg(600)->Arg(1802)->Arg(3000);

static void BM_Periodogram(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)), 3);
  gw::FeatureConfig c;
  c.method = gw::FeatureMethod::Periodogram;
  for (auto _ : state) benchmark::DoNotOptimize(gw::extract(x, c));
}
BENCHMARK(BM_Periodogram)->Arg(1802)->Arg(3000);

static void BM_DtwDistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = gw::minmax_normalize(noise(n, 4));
  const auto b = gw::minmax_normalize(noise(n, 5));
  std::optional<std::size_t> band;
  if (state.range(1) > 0) band = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gw::dtw_distance(a, b, band));
}
BENCHMARK(BM_DtwDistance)->Args({600, 0})->Args({1802, 0})->Args({1802, 100})->Unit(benchmark::kMillisecond);

static void BM_Pam(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = noise(n, 6);
  gw::DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, std::abs(pts[i] - pts[j]));
  }
  for (auto _ : state) benchmark::DoNotOptimize(gw::pam(d, 5, 42));
}
BENCHMARK(BM_Pam)->Arg(126)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_SvmTrain(benchmark::State& state) {
  const auto& d = features();
  for (auto _ : state) benchmark::DoNotOptimize(gw::train_svm(d));
  state.counters["rows"] = static_cast<double>(d.size());
}
BENCHMARK(BM_SvmTrain)->Unit(benchmark::kMillisecond);

static void BM_ForestTrain(benchmark::State& state) {
  const auto& d = features();
  gw::ForestParams p;
  p.n_trees = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gw::train_forest(d, p));
}
BENCHMARK(BM_ForestTrain)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_AnnTrain(benchmark::State& state) {
  const auto& d = features();
  gw::AnnParams p;
  p.epochs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gw::train_ann(d, p));
}
BENCHMARK(BM_AnnTrain)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
