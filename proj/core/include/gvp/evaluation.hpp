#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gvp/dataset.hpp"
#include "gvp/detector.hpp"
#include "gvp/types.hpp"

namespace gvp::eval {

/// Single-frame, single-class matching outcome.
struct MatchResult {
  double iou_threshold = 0.5;
  std::vector<std::pair<int, int>> matches;   // (detection idx, gt idx)
  std::vector<int> unmatched_detections;      // false positives
  std::vector<int> unmatched_ground_truth;    // false negatives
};

/// Detections in confidence-descending order each take the unmatched ground
/// truth with the highest IoU, if that IoU reaches the threshold. IoU ties go
/// to the lower ground-truth index; confidence ties keep input order.
MatchResult match_greedy(std::span<const Detection> dets,
                         std::span<const GroundTruthBox> gts,
                         double iou_threshold);

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

/// Standard ratios with the empty-side conventions: no predictions and
/// nothing to find scores 1, no predictions but misses score 0 (and the
/// mirror for recall); F1 = 0 when P + R = 0.
Prf precision_recall_f1(long tp, long fp, long fn);

struct ScoredDetection {
  double confidence = 0;
  bool is_tp = false;
};

struct PrPoint {
  double recall = 0;
  double precision = 0;
};

/// 101-point interpolated average precision: mean over r in {0, 0.01, …, 1}
/// of the max precision among PR points with recall >= r. With no ground
/// truth, returns 1 when there are also no detections, else 0. `curve`, when
/// given, receives the 101 interpolated (recall, precision) points.
double average_precision(std::vector<ScoredDetection> scored, long total_gt,
                         std::vector<PrPoint>* curve = nullptr);

struct ClassReport {
  int class_id = 0;
  std::string name;
  long gt = 0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double ap = 0;
  std::vector<PrPoint> pr_curve;  // 101 interpolated points
};

/// Frame-level waste-presence confusion at the configured operating point.
struct FrameConfusion {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;
  double accuracy() const {
    const long n = tp + tn + fp + fn;
    return n > 0 ? static_cast<double>(tp + tn) / static_cast<double>(n) : 1.0;
  }
};

struct EvalReport {
  double iou_threshold = 0.5;
  std::vector<ClassReport> per_class;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double pooled_ap = 0;                 // micro-pooled across classes
  std::vector<PrPoint> pr_curve;        // pooled, 101 interpolated points
  double map50 = 0;                     // mean AP over classes with >=1 GT
  FrameConfusion frames;
  double accuracy = 0;                  // frames.accuracy()
};

/// Greedy matching per frame per class at IoU 0.50, detections pooled per
/// class for AP, mAP averaged over classes with ground truth. Every frame in
/// the stream must have an annotation entry (possibly empty); otherwise
/// MissingAnnotations lists the offenders.
EvalReport map50(const detect::DetectionStream& stream,
                 const dataset::AnnotationSet& ann,
                 const detect::DetectorConfig& cfg = {}, double frame_w = 700,
                 double frame_h = 395);

/// Frame-level waste-presence accuracy: predicted positive iff at least one
/// filtered waste detection survives.
double frame_accuracy(const detect::DetectionStream& stream,
                      const dataset::AnnotationSet& ann,
                      const detect::DetectorConfig& cfg, double frame_w = 700,
                      double frame_h = 395);

std::string report_to_json(const EvalReport& report);

/// One row of the plain-text comparison table.
struct ModelRow {
  std::string model;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double map50 = 0;
  double accuracy = 0;  // fraction, printed as percent
};

ModelRow report_row(const std::string& model, const EvalReport& report);

/// Aligned text table with columns Model, Precision, Recall, F1-Score,
/// mAP@50, Accuracy.
std::string render_table(std::span<const ModelRow> rows);

}  // namespace gvp::eval
