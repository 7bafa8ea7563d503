#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gvp/evaluation.hpp"

using namespace gvp;

static void BM_AveragePrecision(benchmark::State& state) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> conf(0, 1);
  std::vector<eval::ScoredDetection> scored;
  const long n = state.range(0);
  long tp = 0;
  for (long i = 0; i < n; ++i) {
    const bool is_tp = (rng() & 1) != 0;
    tp += is_tp;
    scored.push_back({conf(rng), is_tp});
  }
  for (auto _ : state) {
    auto copy = scored;
    benchmark::DoNotOptimize(eval::average_precision(std::move(copy), tp));
  }
}
BENCHMARK(BM_AveragePrecision)->Arg(1000)->Arg(100000);

static void BM_MatchGreedy(benchmark::State& state) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> size(10, 80), conf(0, 1);
  const int n = static_cast<int>(state.range(0));
  std::vector<Detection> dets;
  std::vector<GroundTruthBox> gts;
  for (int i = 0; i < n; ++i) {
    const double w = size(rng), h = size(rng);
    std::uniform_real_distribution<double> px(0, 700 - w), py(0, 395 - h);
    const BBox b{px(rng), py(rng), w, h};
    gts.push_back(GroundTruthBox{b, 0});
    dets.push_back(Detection{BBox{b.x + 2, b.y - 2, w, h}, conf(rng), 0});
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(eval::match_greedy(dets, gts, 0.5));
}
BENCHMARK(BM_MatchGreedy)->Arg(16)->Arg(128);
