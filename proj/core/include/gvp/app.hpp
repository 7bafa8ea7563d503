#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gvp/analytics.hpp"
#include "gvp/dataset.hpp"
#include "gvp/detector.hpp"
#include "gvp/errors.hpp"
#include "gvp/simulate.hpp"
#include "gvp/types.hpp"

namespace gvp::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAdapter = 3;
inline constexpr int kExitIo = 4;

int exit_code_for(Errc code);

struct AppConfig {
  std::string frames_dir;
  std::string labels_dir;
  std::string detections_path;
  std::string frames_list;  // optional output of `sample`, used by `detect`
  std::string out_dir = "out";
  std::string roi_spec;     // "rect:x,y,w,h" or "poly:x1,y1;x2,y2;..."
  double frame_w = 700;
  double frame_h = 395;
  std::vector<std::string> class_names = {"waste", "non-waste"};
  detect::DetectorConfig detector;
  analytics::EventParams events;
  int grid_scale = 1;
  int tz_offset_min = 330;
  std::uint64_t seed = 0;
  bool quiet = false;
};

/// Empty spec means the full frame.
RoiPolygon parse_roi(const std::string& spec, double frame_w, double frame_h);

/// FNV-1a over the canonical config dump; ties ledger records to the exact
/// configuration that produced them.
std::string config_hash(const AppConfig& cfg);

/// Append-only JSONL run log under out_dir, written under an exclusive
/// advisory lock. One record per command invocation, success or failure.
class RunLedger {
 public:
  explicit RunLedger(std::string out_dir);
  void append(const std::string& command, const std::string& cfg_hash,
              std::int64_t start_ms, std::int64_t end_ms, int exit_code,
              const std::vector<std::string>& outputs,
              const std::string& error);

 private:
  std::string path_;
};

// Command entry points. Each validates inputs, does the work, appends one
// ledger record, and returns the process exit code instead of throwing.
int cmd_sample(const AppConfig& cfg, std::int64_t interval_s);
int cmd_prep(const AppConfig& cfg, double train_fraction,
             std::size_t flip_count);
int cmd_detect(const AppConfig& cfg);
int cmd_coverage(const AppConfig& cfg);
int cmd_eval(const AppConfig& cfg, const std::string& model_name);
int cmd_profile(const AppConfig& cfg, const std::string& kind);
int cmd_events(const AppConfig& cfg);
int cmd_simulate(const AppConfig& cfg, const sim::ScenarioConfig& scenario,
                 bool write_frames);
int cmd_report(const AppConfig& cfg);

}  // namespace gvp::app
