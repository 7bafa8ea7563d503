#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gvp/analytics.hpp"
#include "gvp/dataset.hpp"
#include "gvp/detector.hpp"
#include "gvp/types.hpp"

namespace gvp::sim {

struct ItemSizeRange {
  double w_min = 30;
  double w_max = 70;
  double h_min = 24;
  double h_max = 56;
};

struct DetectorNoise {
  double p_miss = 0;        // drop each ground-truth box with this probability
  double clutter_rate = 0;  // Poisson false alarms per frame
  double jitter_sigma = 0;  // px, per coordinate, truncated at 1.5 sigma
};

/// Synthetic GVP scenario: Poisson dumping by local hour, animal scattering,
/// the two-phase morning clean (pile then clear), weekday effects, and a
/// detector noise model. Frames are emitted from local midnight of the start
/// date; the preceding day is simulated as warm-up so day one already carries
/// the overnight load.
struct ScenarioConfig {
  int days = 60;
  int frame_interval_s = 300;
  double frame_w = 700;
  double frame_h = 395;
  RoiPolygon roi;                        // default: full frame
  std::array<double, 24> hourly_rate{};  // expected new items per local hour
  ItemSizeRange item_size;
  int scatter_start_hour = 3;
  int scatter_end_hour = 6;
  double scatter_remove_prob = 0.025;    // per item per frame step
  int clean_start_hour = 6;              // pile phase: first half of window
  int clean_end_hour = 8;                // clear phase: second half
  double pile_consolidation = 0.5;       // pile footprint / pre-pile union
  double pile_min_coverage = 0.09;       // piles never shrink below this
                                         // fraction of the roi; days with
                                         // less waste skip the pile phase
  std::array<double, 7> weekday_multiplier{1, 1, 1, 1, 1, 1, 1};
  DetectorNoise noise;
  double real_conf_lo = 0.55;
  double real_conf_hi = 0.95;
  double clutter_conf_lo = 0.05;
  double clutter_conf_hi = 0.50;
  int tz_offset_min = 330;
  int start_year = 2025;                 // 2025-06-02 is a Monday
  int start_month = 6;
  int start_day = 2;
  std::uint64_t seed = 1;
};

struct ScenarioOutput {
  dataset::AnnotationSet ground_truth;     // every emitted frame has an entry
  detect::DetectionStream detections;
  std::vector<analytics::CoverageSample> truth_coverage;
  std::vector<analytics::GvpEvent> events; // true dump/pile/clear schedule
  long total_gt_boxes = 0;
  long total_detections = 0;
};

/// Throws InvalidConfig naming the offending field.
void validate(const ScenarioConfig& cfg);

int frames_per_day(const ScenarioConfig& cfg);

/// Deterministic under cfg.seed.
ScenarioOutput generate(const ScenarioConfig& cfg);

/// Expected ground-truth box instances summed over all emitted frames,
/// from the exact expectation recursion of the arrival/removal schedule.
double expected_gt_boxes(const ScenarioConfig& cfg);

/// (expected_precision, expected_recall) of the configured noise model.
/// Requires jitter_sigma <= min(item w_min, h_min)/10 so every surviving
/// detection keeps IoU >= 0.5 with its source box; SigmaTooLarge otherwise.
std::pair<double, double> expected_metrics(const ScenarioConfig& cfg);

/// Sets p_miss and clutter_rate so expected_metrics hits the target point.
void tune_noise(ScenarioConfig& cfg, double target_precision,
                double target_recall);

/// Total expected arrivals per day (weekday multiplier 1) that make the
/// expected overnight union coverage hit `target`. Requires a rectangular
/// ROI.
double calibrate_daily_rate(const ScenarioConfig& cfg, double target);

/// Evening-ramp scenario shaped after the observed pattern: dumping from
/// 15:00 peaking at 23:00, a flat 0..3h plateau calibrated to
/// `night_coverage`, scattering 3-6h, pile 6-7h, clear 7-8h.
ScenarioConfig night_peak_scenario(double night_coverage, int days,
                                   std::uint64_t seed);

/// Writes labels/, detections.jsonl, coverage_truth.csv, events_truth.jsonl
/// and scenario.json under out_dir; placeholder frame images when
/// write_frames is set.
void write_output(const std::string& out_dir, const ScenarioConfig& cfg,
                  const ScenarioOutput& out, bool write_frames = false);

std::string config_to_json(const ScenarioConfig& cfg);

}  // namespace gvp::sim
