#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gvp/types.hpp"

/// Small generator for property-style tests.
struct Gen {
  std::mt19937_64 rng;

  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double unif(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
  }
  int uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
  }
  bool chance(double p) { return unif(0, 1) < p; }

  gvp::BBox int_box(int frame_w, int frame_h, int max_w, int max_h) {
    const int w = uniform_int(0, max_w);
    const int h = uniform_int(0, max_h);
    const int x = uniform_int(0, frame_w - w);
    const int y = uniform_int(0, frame_h - h);
    return gvp::BBox{static_cast<double>(x), static_cast<double>(y),
                     static_cast<double>(w), static_cast<double>(h)};
  }

  gvp::BBox real_box(double frame_w, double frame_h, double max_w,
                     double max_h) {
    const double w = unif(0, max_w);
    const double h = unif(0, max_h);
    return gvp::BBox{unif(0, frame_w - w), unif(0, frame_h - h), w, h};
  }

  gvp::NormBox norm_box() {
    const double w = unif(0, 1);
    const double h = unif(0, 1);
    const double cx = unif(w / 2, 1 - w / 2);
    const double cy = unif(h / 2, 1 - h / 2);
    return gvp::NormBox{cx, cy, w, h};
  }

  std::vector<gvp::Detection> detections(int n, double frame_w, double frame_h,
                                         double max_w, double max_h,
                                         int n_classes = 1) {
    std::vector<gvp::Detection> dets;
    for (int i = 0; i < n; ++i) {
      gvp::Detection d;
      d.box = real_box(frame_w, frame_h, max_w, max_h);
      d.confidence = unif(0, 1);
      d.class_id = uniform_int(0, n_classes - 1);
      dets.push_back(d);
    }
    return dets;
  }
};
