#include "gvp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gvp/errors.hpp"
#include "gvp/geometry.hpp"
#include "gvp/timeutil.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace gvp::dataset {

namespace {

// Stable across standard libraries, unlike std::shuffle.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng() % i]);
}

bool is_image_ext(std::string ext) {
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".jpg" || ext == ".jpeg" || ext == ".png";
}

}  // namespace

FrameSource scan_frames(const std::string& root, double fps_hint) {
  if (!fs::is_directory(root))
    raise(Errc::io_error, "frame directory not found: " + root);
  FrameSource src;
  src.root = root;
  src.fps_hint = fps_hint;
  for (const auto& ent : fs::directory_iterator(root)) {
    if (!ent.is_regular_file()) continue;
    const fs::path& p = ent.path();
    if (!is_image_ext(p.extension().string())) continue;
    const std::string stem = p.stem().string();
    std::int64_t ts = 0;
    if (!parse_frame_timestamp(stem, ts))
      raise(Errc::parse_error,
            "frame filename is not YYYYMMDD_HHMMSS: " + p.filename().string());
    src.frames.push_back(FrameEntry{stem, ts, p.string()});
  }
  std::sort(src.frames.begin(), src.frames.end(),
            [](const FrameEntry& a, const FrameEntry& b) {
              return a.ts != b.ts ? a.ts < b.ts : a.frame_id < b.frame_id;
            });
  for (std::size_t i = 1; i < src.frames.size(); ++i) {
    if (src.frames[i].ts == src.frames[i - 1].ts)
      raise(Errc::duplicate_frame_id,
            "duplicate frame timestamp " + src.frames[i].frame_id);
  }
  return src;
}

std::vector<FrameEntry> sample_frames(const FrameSource& src,
                                      std::int64_t interval_s) {
  if (interval_s <= 0)
    raise(Errc::invalid_config, "sampling interval must be positive");
  if (src.frames.empty())
    raise(Errc::empty_source, "no frames in " + src.root);
  std::vector<FrameEntry> out;
  const std::int64_t t0 = src.frames.front().ts;
  std::int64_t last_bucket = -1;
  for (const FrameEntry& f : src.frames) {
    const std::int64_t bucket = (f.ts - t0) / interval_s;
    if (bucket != last_bucket) {
      out.push_back(f);
      last_bucket = bucket;
    }
  }
  return out;
}

std::vector<LabeledBox> read_yolo_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open label file: " + path);
  std::vector<LabeledBox> boxes;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string cls_tok;
    if (!(ls >> cls_tok)) continue;  // blank line
    LabeledBox lb;
    char buf[160];
    try {
      std::size_t used = 0;
      lb.class_id = std::stoi(cls_tok, &used);
      if (used != cls_tok.size() || lb.class_id < 0) throw std::exception();
    } catch (...) {
      std::snprintf(buf, sizeof(buf), "%s:%d: bad class id '%s'", path.c_str(),
                    lineno, cls_tok.c_str());
      raise(Errc::parse_error, buf);
    }
    double fields[4];
    for (double& f : fields) {
      if (!(ls >> f)) {
        std::snprintf(buf, sizeof(buf), "%s:%d: expected 5 fields",
                      path.c_str(), lineno);
        raise(Errc::parse_error, buf);
      }
    }
    std::string extra;
    if (ls >> extra) {
      std::snprintf(buf, sizeof(buf), "%s:%d: trailing token '%s'",
                    path.c_str(), lineno, extra.c_str());
      raise(Errc::parse_error, buf);
    }
    for (double f : fields) {
      if (f < -1e-6 || f > 1.0 + 1e-6) {
        std::snprintf(buf, sizeof(buf), "%s:%d: coordinate %.9g outside [0,1]",
                      path.c_str(), lineno, f);
        raise(Errc::out_of_range, buf);
      }
    }
    lb.box = NormBox{std::clamp(fields[0], 0.0, 1.0),
                     std::clamp(fields[1], 0.0, 1.0),
                     std::clamp(fields[2], 0.0, 1.0),
                     std::clamp(fields[3], 0.0, 1.0)};
    boxes.push_back(lb);
  }
  return boxes;
}

void write_yolo_labels(const std::string& path,
                       std::span<const LabeledBox> boxes) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot write label file: " + path);
  char buf[128];
  for (const LabeledBox& lb : boxes) {
    std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", lb.class_id,
                  lb.box.cx, lb.box.cy, lb.box.w, lb.box.h);
    out << buf;
  }
}

AnnotationSet load_annotations(const std::string& labels_dir,
                               std::vector<std::string> class_names) {
  if (!fs::is_directory(labels_dir))
    raise(Errc::io_error, "label directory not found: " + labels_dir);
  AnnotationSet ann;
  ann.class_names = std::move(class_names);
  for (const auto& ent : fs::directory_iterator(labels_dir)) {
    if (!ent.is_regular_file()) continue;
    const fs::path& p = ent.path();
    if (p.extension() != ".txt") continue;
    auto boxes = read_yolo_labels(p.string());
    for (const LabeledBox& lb : boxes) {
      if (lb.class_id >= static_cast<int>(ann.class_names.size())) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%s: class id %d outside the declared class set (%zu)",
                      p.string().c_str(), lb.class_id, ann.class_names.size());
        raise(Errc::parse_error, buf);
      }
    }
    ann.labels.emplace(p.stem().string(), std::move(boxes));
  }
  return ann;
}

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::test: return "test";
    case Split::unlabeled: return "unlabeled";
  }
  return "?";
}

DatasetManifest split(const AnnotationSet& ann, double train_fraction,
                      std::uint64_t seed) {
  if (train_fraction <= 0 || train_fraction >= 1)
    raise(Errc::invalid_config, "train_fraction must be in (0,1)");
  std::vector<std::string> ids;
  ids.reserve(ann.labels.size());
  for (const auto& [id, _] : ann.labels) ids.push_back(id);
  std::mt19937_64 rng(seed);
  seeded_shuffle(ids, rng);
  const std::size_t n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(ids.size())));

  DatasetManifest m;
  m.entries.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ManifestEntry e;
    e.frame_id = ids[i];
    e.split = i < n_train ? Split::train : Split::test;
    e.labels = ann.labels.at(ids[i]);
    m.entries.push_back(std::move(e));
  }
  return m;
}

DatasetManifest augment_flip(DatasetManifest manifest, std::size_t count,
                             std::uint64_t seed) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& e = manifest.entries[i];
    if (e.split == Split::train && e.transforms.empty())
      candidates.push_back(i);
  }
  if (count > candidates.size()) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "flip count %zu exceeds %zu train entries",
                  count, candidates.size());
    raise(Errc::count_exceeds_train, buf);
  }
  std::mt19937_64 rng(seed);
  seeded_shuffle(candidates, rng);
  for (std::size_t k = 0; k < count; ++k) {
    const ManifestEntry& src = manifest.entries[candidates[k]];
    ManifestEntry e;
    e.frame_id = src.frame_id;
    e.split = Split::train;
    e.transforms = {"flip_h"};
    e.labels.reserve(src.labels.size());
    for (const LabeledBox& lb : src.labels)
      e.labels.push_back(LabeledBox{lb.class_id, flip_horizontal(lb.box)});
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

void add_unlabeled(DatasetManifest& manifest,
                   std::span<const std::string> frame_ids) {
  for (const std::string& id : frame_ids) {
    ManifestEntry e;
    e.frame_id = id;
    e.split = Split::unlabeled;
    manifest.entries.push_back(std::move(e));
  }
}

ManifestCounts count_manifest(const DatasetManifest& manifest) {
  ManifestCounts c;
  for (const ManifestEntry& e : manifest.entries) {
    if (!e.transforms.empty()) {
      ++c.augmented;
    } else {
      switch (e.split) {
        case Split::train: ++c.train; break;
        case Split::test: ++c.test; break;
        case Split::unlabeled: ++c.unlabeled; break;
      }
    }
  }
  c.total = manifest.entries.size();
  return c;
}

void write_manifest(const std::string& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot write manifest: " + path);
  for (const ManifestEntry& e : manifest.entries) {
    ordered_json j;
    j["frame_id"] = e.frame_id;
    j["split"] = split_name(e.split);
    j["transforms"] = e.transforms;
    ordered_json labels = ordered_json::array();
    for (const LabeledBox& lb : e.labels) {
      labels.push_back(ordered_json{{"cls", lb.class_id},
                                    {"cx", lb.box.cx},
                                    {"cy", lb.box.cy},
                                    {"w", lb.box.w},
                                    {"h", lb.box.h}});
    }
    j["labels"] = std::move(labels);
    out << j.dump() << '\n';
  }
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open manifest: " + path);
  DatasetManifest m;
  std::string line;
  int lineno = 0;
  char buf[128];
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& ex) {
      std::snprintf(buf, sizeof(buf), "%s:%d: %s", path.c_str(), lineno,
                    ex.what());
      raise(Errc::parse_error, buf);
    }
    try {
      ManifestEntry e;
      e.frame_id = j.at("frame_id").get<std::string>();
      const std::string s = j.at("split").get<std::string>();
      if (s == "train")
        e.split = Split::train;
      else if (s == "test")
        e.split = Split::test;
      else if (s == "unlabeled")
        e.split = Split::unlabeled;
      else
        throw std::runtime_error("unknown split '" + s + "'");
      for (const auto& t : j.at("transforms"))
        e.transforms.push_back(t.get<std::string>());
      for (const auto& l : j.at("labels")) {
        LabeledBox lb;
        lb.class_id = l.at("cls").get<int>();
        lb.box = NormBox{l.at("cx").get<double>(), l.at("cy").get<double>(),
                         l.at("w").get<double>(), l.at("h").get<double>()};
        e.labels.push_back(lb);
      }
      m.entries.push_back(std::move(e));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& ex) {
      std::snprintf(buf, sizeof(buf), "%s:%d: %s", path.c_str(), lineno,
                    ex.what());
      raise(Errc::parse_error, buf);
    }
  }
  return m;
}

}  // namespace gvp::dataset
