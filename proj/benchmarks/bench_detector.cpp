#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gvp/detector.hpp"

using namespace gvp;

namespace {

std::vector<Detection> random_dets(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> size(5, 120), conf(0, 1);
  std::vector<Detection> dets;
  dets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = size(rng), h = size(rng);
    std::uniform_real_distribution<double> px(0, 700 - w), py(0, 395 - h);
    dets.push_back(Detection{BBox{px(rng), py(rng), w, h}, conf(rng), 0});
  }
  return dets;
}

}  // namespace

static void BM_Nms(benchmark::State& state) {
  const auto dets = random_dets(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(detect::nms(dets, 0.45));
}
BENCHMARK(BM_Nms)->Arg(32)->Arg(256);

static void BM_WasteCount(benchmark::State& state) {
  FrameRecord rec;
  rec.detections = random_dets(static_cast<std::size_t>(state.range(0)), 12);
  const detect::DetectorConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(detect::waste_count(rec, cfg));
}
BENCHMARK(BM_WasteCount)->Arg(32)->Arg(256);
