#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "checks.hpp"
#include "gvp/evaluation.hpp"
#include "gvp/geometry.hpp"
#include "gvp/simulate.hpp"
#include "gvp/timeutil.hpp"
#include "prop.hpp"
#include "tmpdir.hpp"

using namespace gvp;
using namespace gvp::sim;

namespace {

ScenarioConfig small_scenario(std::uint64_t seed, int days = 2,
                              int interval = 1800) {
  ScenarioConfig cfg;
  cfg.days = days;
  cfg.frame_interval_s = interval;
  cfg.roi = full_frame_roi(cfg.frame_w, cfg.frame_h);
  cfg.seed = seed;
  for (int h = 15; h < 24; ++h) cfg.hourly_rate[h] = 3.0;
  return cfg;
}

}  // namespace

TEST_CASE("validate names the offending field") {
  ScenarioConfig cfg = small_scenario(1);
  cfg.days = 0;
  try {
    validate(cfg);
    FAIL("expected InvalidConfig");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_config);
    CHECK(std::string(e.what()).find("days") != std::string::npos);
  }

  cfg = small_scenario(1);
  cfg.frame_interval_s = 7;  // does not divide 86400
  CHECK(thrown_code([&] { validate(cfg); }) == "InvalidConfig");

  cfg = small_scenario(1);
  cfg.noise.p_miss = 1.5;
  CHECK(thrown_code([&] { validate(cfg); }) == "InvalidConfig");

  cfg = small_scenario(1);
  cfg.item_size.w_max = 10000;
  CHECK(thrown_code([&] { validate(cfg); }) == "InvalidConfig");

  cfg = small_scenario(1);
  cfg.clutter_conf_hi = 0.9;  // above the real band's low end
  cfg.noise.clutter_rate = 1;
  CHECK(thrown_code([&] { validate(cfg); }) == "InvalidConfig");
}

TEST_CASE("zero rates produce an empty world") {
  ScenarioConfig cfg = small_scenario(5);
  cfg.hourly_rate.fill(0.0);
  const ScenarioOutput out = generate(cfg);
  CHECK(out.total_gt_boxes == 0);
  CHECK(out.total_detections == 0);
  for (const auto& s : out.truth_coverage) CHECK(s.coverage == 0.0);
  for (const auto& [id, boxes] : out.ground_truth.labels)
    CHECK(boxes.empty());
}

TEST_CASE("noiseless detections replicate the ground truth") {
  const ScenarioConfig cfg = small_scenario(7);
  const ScenarioOutput out = generate(cfg);
  CHECK(out.total_gt_boxes > 0);
  CHECK(out.total_detections == out.total_gt_boxes);
  for (const FrameRecord& rec : out.detections.frames) {
    const auto& labels = out.ground_truth.labels.at(rec.frame_id);
    REQUIRE(rec.detections.size() == labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const BBox gt = norm_to_pixel(labels[i].box, cfg.frame_w, cfg.frame_h);
      CHECK(rec.detections[i].box.x == doctest::Approx(gt.x).epsilon(1e-9));
      CHECK(rec.detections[i].box.w == doctest::Approx(gt.w).epsilon(1e-9));
    }
  }
  const eval::EvalReport report =
      eval::map50(out.detections, out.ground_truth, {}, cfg.frame_w,
                  cfg.frame_h);
  CHECK(report.map50 == doctest::Approx(1.0));
  CHECK(report.precision == doctest::Approx(1.0));
  CHECK(report.recall == doctest::Approx(1.0));
}

TEST_CASE("identical seeds reproduce bit-identical output") {
  Gen gen(61);
  for (int c = 0; c < 200; ++c) {
    ScenarioConfig cfg = small_scenario(gen.rng(), 1, 3600);
    for (int h = 0; h < 24; ++h) cfg.hourly_rate[h] = gen.unif(0, 6);
    cfg.scatter_remove_prob = gen.unif(0, 0.3);
    cfg.noise.p_miss = gen.unif(0, 0.4);
    cfg.noise.clutter_rate = gen.unif(0, 1.0);
    cfg.noise.jitter_sigma = gen.unif(0, 2.0);
    const ScenarioOutput a = generate(cfg);
    const ScenarioOutput b = generate(cfg);
    CHECK(a.total_gt_boxes == b.total_gt_boxes);
    CHECK(a.total_detections == b.total_detections);
    REQUIRE(a.detections.frames.size() == b.detections.frames.size());
    for (std::size_t f = 0; f < a.detections.frames.size(); ++f) {
      const FrameRecord& fa = a.detections.frames[f];
      const FrameRecord& fb = b.detections.frames[f];
      REQUIRE(fa.detections.size() == fb.detections.size());
      for (std::size_t i = 0; i < fa.detections.size(); ++i) {
        CHECK(fa.detections[i].box.x == fb.detections[i].box.x);
        CHECK(fa.detections[i].box.y == fb.detections[i].box.y);
        CHECK(fa.detections[i].confidence == fb.detections[i].confidence);
      }
    }
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
      CHECK(a.events[i].kind == b.events[i].kind);
      CHECK(a.events[i].start_ts == b.events[i].start_ts);
    }
    REQUIRE(a.truth_coverage.size() == b.truth_coverage.size());
    for (std::size_t i = 0; i < a.truth_coverage.size(); ++i)
      CHECK(a.truth_coverage[i].coverage == b.truth_coverage[i].coverage);
  }
}

TEST_CASE("different seeds diverge") {
  ScenarioConfig a_cfg = small_scenario(100);
  ScenarioConfig b_cfg = small_scenario(101);
  const ScenarioOutput a = generate(a_cfg);
  const ScenarioOutput b = generate(b_cfg);
  CHECK(a.total_gt_boxes != b.total_gt_boxes);
}

TEST_CASE("truth coverage equals the geometry of the ground-truth boxes") {
  const ScenarioConfig cfg = small_scenario(9);
  const ScenarioOutput out = generate(cfg);
  REQUIRE(out.truth_coverage.size() == out.detections.frames.size());
  for (std::size_t f = 0; f < out.truth_coverage.size(); f += 7) {
    const std::string& id = out.detections.frames[f].frame_id;
    std::vector<BBox> boxes;
    for (const auto& lb : out.ground_truth.labels.at(id))
      boxes.push_back(norm_to_pixel(lb.box, cfg.frame_w, cfg.frame_h));
    CHECK(out.truth_coverage[f].coverage ==
          doctest::Approx(coverage_fraction(boxes, cfg.roi)).epsilon(1e-9));
  }
}

TEST_CASE("ground truth is clean after every clear until dumping resumes") {
  ScenarioConfig cfg = small_scenario(13, 3, 300);
  const ScenarioOutput out = generate(cfg);
  for (const auto& s : out.truth_coverage) {
    const int hour = local_hour(s.ts, cfg.tz_offset_min);
    if (hour >= 7 && hour < 15) {
      CHECK(s.coverage == 0.0);
      CHECK(s.waste_count == 0);
    }
  }
  // and the overnight hours carry waste
  double night = 0;
  for (const auto& s : out.truth_coverage)
    if (local_hour(s.ts, cfg.tz_offset_min) < 3) night += s.coverage;
  CHECK(night > 0);
}

TEST_CASE("the pile step never grows the union area") {
  Gen gen(62);
  for (int c = 0; c < 40; ++c) {
    ScenarioConfig cfg = small_scenario(gen.rng(), 2, 300);
    cfg.pile_consolidation = gen.unif(0.2, 1.0);
    cfg.scatter_remove_prob = gen.unif(0.0, 0.1);
    const ScenarioOutput out = generate(cfg);
    // pile phase opens at clean_start; compare with the preceding sample
    for (std::size_t i = 1; i < out.truth_coverage.size(); ++i) {
      const auto& prev = out.truth_coverage[i - 1];
      const auto& cur = out.truth_coverage[i];
      const std::int64_t sod =
          floor_mod(cur.ts + cfg.tz_offset_min * 60, 86400);
      const bool pile_window = sod >= cfg.clean_start_hour * 3600 &&
                               sod < (cfg.clean_start_hour + cfg.clean_end_hour) * 1800;
      if (pile_window && cur.waste_count == prev.waste_count)
        CHECK(cur.coverage <= prev.coverage + 1e-9);
    }
    for (const auto& e : out.events)
      if (e.kind == analytics::EventKind::pile)
        CHECK(e.coverage_after < e.coverage_before);
  }
}

TEST_CASE("expected_metrics arithmetic") {
  ScenarioConfig cfg = small_scenario(15);
  SUBCASE("noiseless is a perfect operating point") {
    const auto [p, r] = expected_metrics(cfg);
    CHECK(p == doctest::Approx(1.0));
    CHECK(r == doctest::Approx(1.0));
  }
  SUBCASE("half the boxes dropped, clutter at half the TP rate") {
    const double g = expected_gt_boxes(cfg);
    const double frames = static_cast<double>(cfg.days) * frames_per_day(cfg);
    cfg.noise.p_miss = 0.5;
    cfg.noise.clutter_rate = 0.25 * g / frames;  // E[FP] = 0.25 g
    const auto [p, r] = expected_metrics(cfg);
    CHECK(r == doctest::Approx(0.5));
    CHECK(p == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  }
  SUBCASE("tuning hits a requested operating point") {
    cfg.noise.jitter_sigma = 2.0;
    tune_noise(cfg, 0.94, 0.84);
    const auto [p, r] = expected_metrics(cfg);
    CHECK(p == doctest::Approx(0.94).epsilon(1e-9));
    CHECK(r == doctest::Approx(0.84).epsilon(1e-9));
  }
  SUBCASE("oversized jitter is rejected") {
    cfg.noise.jitter_sigma = 10.0;  // min item dim is 24
    CHECK(thrown_code([&] { expected_metrics(cfg); }) == "SigmaTooLarge");
  }
}

TEST_CASE("expected_gt_boxes tracks the measured mean") {
  ScenarioConfig cfg = small_scenario(0, 2, 900);
  cfg.scatter_remove_prob = 0.05;
  const double expected = expected_gt_boxes(cfg);
  double measured = 0;
  const int runs = 12;
  for (int s = 0; s < runs; ++s) {
    cfg.seed = 1000 + s;
    measured += static_cast<double>(generate(cfg).total_gt_boxes);
  }
  measured /= runs;
  CHECK(measured == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("night-peak preset hits its coverage target at a small scale") {
  const ScenarioConfig cfg = night_peak_scenario(0.39, 8, 21);
  const ScenarioOutput out = generate(cfg);
  const analytics::Profile p =
      analytics::hourly_profile(out.truth_coverage, cfg.tz_offset_min);
  const double plateau =
      (p.bins[0].mean + p.bins[1].mean + p.bins[2].mean) / 3.0;
  CHECK(plateau == doctest::Approx(0.39).epsilon(0.12));  // 8 days is noisy
}

TEST_CASE("scenario output writes the pipeline file formats") {
  TempDir dir;
  ScenarioConfig cfg = small_scenario(33, 1, 3600);
  cfg.noise.p_miss = 0.2;
  cfg.noise.clutter_rate = 0.3;
  cfg.noise.jitter_sigma = 1.0;
  const ScenarioOutput out = generate(cfg);
  write_output(dir.str(), cfg, out, /*write_frames=*/true);

  const auto stream = detect::load_detections(dir.file("detections.jsonl"));
  CHECK(stream.frames.size() == out.detections.frames.size());
  const auto ann =
      dataset::load_annotations(dir.file("labels"), {"waste", "non-waste"});
  CHECK(ann.labels.size() == out.ground_truth.labels.size());
  const auto series = analytics::read_coverage_csv(dir.file("coverage_truth.csv"));
  CHECK(series.size() == out.truth_coverage.size());
  const auto frames = dataset::scan_frames(dir.file("frames"));
  CHECK(frames.frames.size() == out.detections.frames.size());
  CHECK(std::filesystem::is_regular_file(dir.file("scenario.json")));
  CHECK(std::filesystem::is_regular_file(dir.file("events_truth.jsonl")));
}
