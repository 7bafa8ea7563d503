#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gvp/geometry.hpp"

using namespace gvp;

namespace {

std::vector<BBox> random_boxes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> size(5, 120);
  std::vector<BBox> boxes;
  boxes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = size(rng), h = size(rng);
    std::uniform_real_distribution<double> px(0, 700 - w), py(0, 395 - h);
    boxes.push_back(BBox{px(rng), py(rng), w, h});
  }
  return boxes;
}

}  // namespace

static void BM_UnionArea(benchmark::State& state) {
  const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(union_area(boxes));
}
BENCHMARK(BM_UnionArea)->Arg(8)->Arg(64)->Arg(256);

static void BM_CoverageRectRoi(benchmark::State& state) {
  const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)), 2);
  const RoiPolygon roi = rect_roi(0, 0, 700, 395, 700, 395);
  for (auto _ : state)
    benchmark::DoNotOptimize(coverage_fraction(boxes, roi));
}
BENCHMARK(BM_CoverageRectRoi)->Arg(8)->Arg(64)->Arg(256);

static void BM_CoveragePolygonRoi(benchmark::State& state) {
  const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)), 3);
  RoiPolygon tri;
  tri.frame_w = 700;
  tri.frame_h = 395;
  tri.vertices = {{10, 10}, {690, 30}, {350, 390}};
  for (auto _ : state)
    benchmark::DoNotOptimize(coverage_fraction(boxes, tri));
}
BENCHMARK(BM_CoveragePolygonRoi)->Arg(8)->Arg(64);

BENCHMARK_MAIN();
