#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gvp/types.hpp"

namespace gvp::dataset {

struct FrameEntry {
  std::string frame_id;  // filename stem, YYYYMMDD_HHMMSS
  std::int64_t ts = 0;   // UTC seconds parsed from the stem
  std::string path;
};

/// Directory of timestamp-named image files.
struct FrameSource {
  std::string root;
  double fps_hint = 30.0;           // declared fps of the origin video
  std::vector<FrameEntry> frames;   // sorted by ts, unique
};

/// Scans `root` for <YYYYMMDD>_<HHMMSS>.(jpg|jpeg|png) files. Image files
/// with unparseable names raise ParseError; duplicate timestamps raise
/// DuplicateFrameId; other files are ignored.
FrameSource scan_frames(const std::string& root, double fps_hint = 30.0);

/// Earliest frame of each consecutive `interval`-wide bucket, buckets aligned
/// to the first frame's timestamp. Throws EmptySource.
std::vector<FrameEntry> sample_frames(const FrameSource& src,
                                      std::int64_t interval_s);

struct LabeledBox {
  int class_id = 0;
  NormBox box;
};

/// YOLO label file: one `class cx cy w h` line per box.
std::vector<LabeledBox> read_yolo_labels(const std::string& path);
void write_yolo_labels(const std::string& path,
                       std::span<const LabeledBox> boxes);

struct AnnotationSet {
  std::vector<std::string> class_names;          // index = class_id
  std::map<std::string, std::vector<LabeledBox>> labels;  // frame_id -> boxes
};

/// Loads every .txt file in `labels_dir` as <frame_id>.txt. Class ids must be
/// < |class_names|.
AnnotationSet load_annotations(const std::string& labels_dir,
                               std::vector<std::string> class_names);

enum class Split { train, test, unlabeled };
const char* split_name(Split s);

struct ManifestEntry {
  std::string frame_id;
  Split split = Split::unlabeled;
  std::vector<std::string> transforms;  // e.g. "flip_h", "blur:1.5"
  std::vector<LabeledBox> labels;
};

struct Preprocess {
  double target_w = 700;
  double target_h = 395;
  bool normalize = true;  // unit-interval pixel scaling, applied by adapters
};

struct DatasetManifest {
  Preprocess preprocess;
  std::vector<ManifestEntry> entries;
};

/// Deterministic seeded shuffle of the annotated frames;
/// |train| = round(train_fraction * N), remainder test.
DatasetManifest split(const AnnotationSet& ann, double train_fraction,
                      std::uint64_t seed);

/// Adds `count` horizontally-flipped copies of train entries, sampled without
/// replacement. Flipped labels get cx' = 1 - cx. Throws CountExceedsTrain.
DatasetManifest augment_flip(DatasetManifest manifest, std::size_t count,
                             std::uint64_t seed);

/// Appends `unlabeled`-split entries for frames without annotations.
void add_unlabeled(DatasetManifest& manifest,
                   std::span<const std::string> frame_ids);

struct ManifestCounts {
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t unlabeled = 0;
  std::size_t augmented = 0;
  std::size_t total = 0;
};
ManifestCounts count_manifest(const DatasetManifest& manifest);

/// Line-oriented JSON, one {frame_id, split, transforms, labels} per line.
void write_manifest(const std::string& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::string& path);

}  // namespace gvp::dataset
