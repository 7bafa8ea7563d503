#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gvp/types.hpp"

namespace gvp::detect {

struct DetectorConfig {
  double confidence_threshold = 0.25;
  double nms_iou_threshold = 0.45;
  std::optional<std::set<int>> class_filter;
  std::string adapter_cmd;  // external inference command; empty = none
};

/// Ordered frame records with raw detections. Timestamps strictly increase,
/// frame ids are unique.
struct DetectionStream {
  std::vector<FrameRecord> frames;
};

/// Line-oriented JSON, one record per line:
///   {"frame_id": str, "ts": int, "boxes": [{"x","y","w","h","conf","cls"}]}
/// Pixel coordinates, top-left origin.
DetectionStream load_detections(const std::string& path);
void write_detections(const std::string& path, const DetectionStream& stream);

/// Runs `cfg.adapter_cmd` through /bin/sh, feeding one frame path per line on
/// stdin and reading one detection record per line from stdout. Throws
/// AdapterCrashed on nonzero exit and ProtocolViolation on missing, extra or
/// out-of-order records.
DetectionStream run_adapter(const DetectorConfig& cfg,
                            std::span<const std::string> frame_paths);

/// Greedy non-maximum suppression per class: confidence descending (ties by
/// input order), keep a box iff its IoU with every kept box of the same class
/// is below the threshold. Output preserves input order.
std::vector<Detection> nms(std::span<const Detection> dets,
                           double iou_threshold);

/// Confidence filter, optional class filter, then NMS.
std::vector<Detection> apply_config(std::span<const Detection> dets,
                                    const DetectorConfig& cfg);

/// Waste detections surviving apply_config.
int waste_count(const FrameRecord& rec, const DetectorConfig& cfg);

}  // namespace gvp::detect
