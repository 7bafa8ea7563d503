#include "gvp/app.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gvp/evaluation.hpp"
#include "gvp/geometry.hpp"
#include "gvp/timeutil.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace gvp::app {

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::adapter_crashed:
    case Errc::protocol_violation:
      return kExitAdapter;
    case Errc::io_error:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

RoiPolygon parse_roi(const std::string& spec, double frame_w, double frame_h) {
  if (spec.empty()) return full_frame_roi(frame_w, frame_h);
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "rect") {
    double x, y, w, h;
    if (std::sscanf(body.c_str(), "%lf,%lf,%lf,%lf", &x, &y, &w, &h) != 4)
      raise(Errc::invalid_config, "roi rect spec must be rect:x,y,w,h");
    return rect_roi(x, y, w, h, frame_w, frame_h);
  }
  if (kind == "poly") {
    RoiPolygon roi;
    roi.frame_w = frame_w;
    roi.frame_h = frame_h;
    std::istringstream ss(body);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
      double x, y;
      if (std::sscanf(pair.c_str(), "%lf,%lf", &x, &y) != 2)
        raise(Errc::invalid_config,
              "roi poly spec must be poly:x1,y1;x2,y2;...");
      roi.vertices.push_back(Point{x, y});
    }
    return roi;
  }
  raise(Errc::invalid_config, "unknown roi spec '" + spec + "'");
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string config_hash(const AppConfig& cfg) {
  std::ostringstream s;
  s << cfg.frames_dir << '\x1f' << cfg.labels_dir << '\x1f'
    << cfg.detections_path << '\x1f' << cfg.frames_list << '\x1f'
    << cfg.out_dir << '\x1f' << cfg.roi_spec << '\x1f' << cfg.frame_w << '\x1f'
    << cfg.frame_h << '\x1f';
  for (const std::string& c : cfg.class_names) s << c << ',';
  s << '\x1f' << cfg.detector.confidence_threshold << '\x1f'
    << cfg.detector.nms_iou_threshold << '\x1f';
  if (cfg.detector.class_filter)
    for (int c : *cfg.detector.class_filter) s << c << ',';
  s << '\x1f' << cfg.detector.adapter_cmd << '\x1f' << cfg.events.drop_rel
    << '\x1f' << cfg.events.rise_abs << '\x1f' << cfg.events.clean_level
    << '\x1f' << cfg.events.window_s << '\x1f' << cfg.grid_scale << '\x1f'
    << cfg.tz_offset_min << '\x1f' << cfg.seed;
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(s.str())));
  return buf;
}

RunLedger::RunLedger(std::string out_dir)
    : path_((fs::path(out_dir) / "ledger.jsonl").string()) {}

void RunLedger::append(const std::string& command, const std::string& cfg_hash,
                       std::int64_t start_ms, std::int64_t end_ms,
                       int exit_code, const std::vector<std::string>& outputs,
                       const std::string& error) {
  static int seq = 0;
  ordered_json j;
  char run_id[64];
  std::snprintf(run_id, sizeof(run_id), "%lld-%d-%d",
                static_cast<long long>(start_ms), getpid(), seq++);
  j["run_id"] = run_id;
  j["command"] = command;
  j["config_hash"] = cfg_hash;
  j["start_ms"] = start_ms;
  j["end_ms"] = end_ms;
  j["exit_code"] = exit_code;
  j["outputs"] = outputs;
  if (!error.empty()) j["error"] = error;
  const std::string line = j.dump() + "\n";

  const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) return;  // best effort: the run itself already succeeded/failed
  ::flock(fd, LOCK_EX);
  ssize_t rc = ::write(fd, line.data(), line.size());
  (void)rc;
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

namespace {

template <typename Body>
int run_command(const AppConfig& cfg, const char* name, Body&& body) {
  const std::int64_t start = now_ms();
  std::vector<std::string> outputs;
  int code = kExitOk;
  std::string error;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  try {
    if (ec) raise(Errc::io_error, "cannot create " + cfg.out_dir);
    body(outputs);
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    error = e.what();
  } catch (const fs::filesystem_error& e) {
    code = kExitIo;
    error = e.what();
  } catch (const std::exception& e) {
    code = kExitValidation;
    error = e.what();
  }
  RunLedger(cfg.out_dir).append(name, config_hash(cfg), start, now_ms(), code,
                                outputs, error);
  if (code != kExitOk && !cfg.quiet)
    std::fprintf(stderr, "gvp %s: error: %s\n", name, error.c_str());
  return code;
}

void say(const AppConfig& cfg, const char* fmt, ...) {
  if (cfg.quiet) return;
  va_list ap;
  va_start(ap, fmt);
  std::vprintf(fmt, ap);
  va_end(ap);
  std::printf("\n");
}

std::string out_path(const AppConfig& cfg, const char* name) {
  return (fs::path(cfg.out_dir) / name).string();
}

void require_dir(const std::string& path, const char* what) {
  if (path.empty())
    raise(Errc::invalid_config, std::string(what) + " is not configured");
  if (!fs::is_directory(path))
    raise(Errc::io_error, std::string(what) + " not found: " + path);
}

void require_file(const std::string& path, const char* what) {
  if (path.empty())
    raise(Errc::invalid_config, std::string(what) + " is not configured");
  if (!fs::is_regular_file(path))
    raise(Errc::io_error, std::string(what) + " not found: " + path);
}

detect::DetectionStream load_stream(const AppConfig& cfg) {
  require_file(cfg.detections_path, "detections file");
  return detect::load_detections(cfg.detections_path);
}

std::vector<analytics::CoverageSample> build_series(const AppConfig& cfg) {
  const detect::DetectionStream stream = load_stream(cfg);
  const RoiPolygon roi = parse_roi(cfg.roi_spec, cfg.frame_w, cfg.frame_h);
  validate_roi(roi);
  return analytics::coverage_series(stream, roi, cfg.detector, cfg.grid_scale);
}

}  // namespace

int cmd_sample(const AppConfig& cfg, std::int64_t interval_s) {
  return run_command(cfg, "sample", [&](std::vector<std::string>& outputs) {
    require_dir(cfg.frames_dir, "frames directory");
    const auto src = dataset::scan_frames(cfg.frames_dir);
    const auto sampled = dataset::sample_frames(src, interval_s);
    const std::string path = out_path(cfg, "frame_list.txt");
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    for (const auto& f : sampled) out << f.path << '\n';
    outputs.push_back(path);
    say(cfg, "sampled %zu of %zu frames -> %s", sampled.size(),
        src.frames.size(), path.c_str());
  });
}

int cmd_prep(const AppConfig& cfg, double train_fraction,
             std::size_t flip_count) {
  return run_command(cfg, "prep", [&](std::vector<std::string>& outputs) {
    require_dir(cfg.frames_dir, "frames directory");
    require_dir(cfg.labels_dir, "labels directory");
    const auto src = dataset::scan_frames(cfg.frames_dir);
    const auto ann = dataset::load_annotations(cfg.labels_dir, cfg.class_names);
    auto manifest = dataset::split(ann, train_fraction, cfg.seed);
    manifest = dataset::augment_flip(std::move(manifest), flip_count, cfg.seed);
    std::vector<std::string> unlabeled;
    for (const auto& f : src.frames)
      if (!ann.labels.count(f.frame_id)) unlabeled.push_back(f.frame_id);
    dataset::add_unlabeled(manifest, unlabeled);
    const std::string path = out_path(cfg, "manifest.jsonl");
    dataset::write_manifest(path, manifest);
    outputs.push_back(path);
    const auto c = dataset::count_manifest(manifest);
    say(cfg,
        "manifest: %zu entries (train %zu, test %zu, unlabeled %zu, "
        "augmented %zu) -> %s",
        c.total, c.train, c.test, c.unlabeled, c.augmented, path.c_str());
  });
}

int cmd_detect(const AppConfig& cfg) {
  return run_command(cfg, "detect", [&](std::vector<std::string>& outputs) {
    detect::DetectionStream stream;
    if (!cfg.detector.adapter_cmd.empty()) {
      std::vector<std::string> paths;
      if (!cfg.frames_list.empty()) {
        require_file(cfg.frames_list, "frames list");
        std::ifstream in(cfg.frames_list);
        std::string line;
        while (std::getline(in, line))
          if (!line.empty()) paths.push_back(line);
      } else {
        require_dir(cfg.frames_dir, "frames directory");
        for (const auto& f : dataset::scan_frames(cfg.frames_dir).frames)
          paths.push_back(f.path);
      }
      stream = detect::run_adapter(cfg.detector, paths);
    } else {
      stream = load_stream(cfg);
    }
    const std::string path = out_path(cfg, "detections.jsonl");
    detect::write_detections(path, stream);
    outputs.push_back(path);
    say(cfg, "detections: %zu frames -> %s", stream.frames.size(),
        path.c_str());
  });
}

int cmd_coverage(const AppConfig& cfg) {
  return run_command(cfg, "coverage", [&](std::vector<std::string>& outputs) {
    const auto series = build_series(cfg);
    const std::string path = out_path(cfg, "coverage.csv");
    analytics::write_coverage_csv(path, series, cfg.tz_offset_min);
    outputs.push_back(path);
    say(cfg, "coverage: %zu samples -> %s", series.size(), path.c_str());
  });
}

int cmd_eval(const AppConfig& cfg, const std::string& model_name) {
  return run_command(cfg, "eval", [&](std::vector<std::string>& outputs) {
    const detect::DetectionStream stream = load_stream(cfg);
    require_dir(cfg.labels_dir, "labels directory");
    const auto ann = dataset::load_annotations(cfg.labels_dir, cfg.class_names);
    const eval::EvalReport report =
        eval::map50(stream, ann, cfg.detector, cfg.frame_w, cfg.frame_h);
    const std::string json_path = out_path(cfg, "eval.json");
    std::ofstream jo(json_path, std::ios::trunc);
    if (!jo) raise(Errc::io_error, "cannot write " + json_path);
    jo << eval::report_to_json(report) << '\n';
    outputs.push_back(json_path);
    const eval::ModelRow row = eval::report_row(model_name, report);
    const std::string table = eval::render_table({&row, 1});
    const std::string txt_path = out_path(cfg, "eval.txt");
    std::ofstream to(txt_path, std::ios::trunc);
    if (!to) raise(Errc::io_error, "cannot write " + txt_path);
    to << table;
    outputs.push_back(txt_path);
    if (!cfg.quiet) std::fputs(table.c_str(), stdout);
  });
}

int cmd_profile(const AppConfig& cfg, const std::string& kind) {
  return run_command(cfg, "profile", [&](std::vector<std::string>& outputs) {
    const auto series = build_series(cfg);
    analytics::Profile profile;
    if (kind == "hourly")
      profile = analytics::hourly_profile(series, cfg.tz_offset_min);
    else if (kind == "daily")
      profile = analytics::daily_profile(series, cfg.tz_offset_min);
    else if (kind == "weekday")
      profile = analytics::weekday_profile(series, cfg.tz_offset_min);
    else
      raise(Errc::invalid_config,
            "profile kind must be hourly, daily or weekday");
    const std::string csv =
        out_path(cfg, ("profile_" + kind + ".csv").c_str());
    const std::string json =
        out_path(cfg, ("profile_" + kind + ".json").c_str());
    analytics::write_profile_csv(csv, profile);
    analytics::write_profile_json(json, profile);
    outputs.push_back(csv);
    outputs.push_back(json);
    say(cfg, "profile %s: %zu bins -> %s", kind.c_str(), profile.bins.size(),
        csv.c_str());
  });
}

int cmd_events(const AppConfig& cfg) {
  return run_command(cfg, "events", [&](std::vector<std::string>& outputs) {
    const auto series = build_series(cfg);
    const auto events = analytics::detect_events(series, cfg.events);
    const std::string path = out_path(cfg, "events.jsonl");
    analytics::write_events_jsonl(path, events);
    outputs.push_back(path);
    std::size_t dumps = 0, piles = 0, clears = 0;
    for (const auto& e : events) {
      if (e.kind == analytics::EventKind::dump) ++dumps;
      if (e.kind == analytics::EventKind::pile) ++piles;
      if (e.kind == analytics::EventKind::clear) ++clears;
    }
    say(cfg, "events: %zu dump, %zu pile, %zu clear -> %s", dumps, piles,
        clears, path.c_str());
  });
}

int cmd_simulate(const AppConfig& cfg, const sim::ScenarioConfig& scenario,
                 bool write_frames) {
  return run_command(cfg, "simulate", [&](std::vector<std::string>& outputs) {
    const sim::ScenarioOutput out = sim::generate(scenario);
    sim::write_output(cfg.out_dir, scenario, out, write_frames);
    for (const char* name :
         {"labels", "detections.jsonl", "coverage_truth.csv",
          "events_truth.jsonl", "scenario.json"})
      outputs.push_back(out_path(cfg, name));
    if (write_frames) outputs.push_back(out_path(cfg, "frames"));
    say(cfg,
        "simulated %d days: %zu frames, %ld ground-truth boxes, %ld "
        "detections, %zu true events -> %s",
        scenario.days, out.detections.frames.size(), out.total_gt_boxes,
        out.total_detections, out.events.size(), cfg.out_dir.c_str());
  });
}

int cmd_report(const AppConfig& cfg) {
  return run_command(cfg, "report", [&](std::vector<std::string>& outputs) {
    std::ostringstream rep;
    rep << "gvp run report\n==============\n";
    bool any = false;

    const std::string eval_txt = out_path(cfg, "eval.txt");
    if (fs::is_regular_file(eval_txt)) {
      std::ifstream in(eval_txt);
      rep << "\nDetection quality\n-----------------\n" << in.rdbuf();
      any = true;
    }
    const std::string coverage_csv = out_path(cfg, "coverage.csv");
    if (fs::is_regular_file(coverage_csv)) {
      const auto series = analytics::read_coverage_csv(coverage_csv);
      double mean = 0, mx = 0;
      for (const auto& s : series) {
        mean += s.coverage;
        mx = std::max(mx, s.coverage);
      }
      if (!series.empty()) mean /= static_cast<double>(series.size());
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "\nCoverage\n--------\nsamples: %zu\nmean: %.4f\nmax: "
                    "%.4f\n",
                    series.size(), mean, mx);
      rep << buf;
      any = true;
    }
    for (const char* kind : {"hourly", "daily", "weekday"}) {
      const std::string p =
          out_path(cfg, (std::string("profile_") + kind + ".csv").c_str());
      if (!fs::is_regular_file(p)) continue;
      std::ifstream in(p);
      rep << "\nProfile (" << kind << ")\n---------------\n" << in.rdbuf();
      any = true;
    }
    const std::string events_path = out_path(cfg, "events.jsonl");
    if (fs::is_regular_file(events_path)) {
      std::ifstream in(events_path);
      std::string line;
      std::size_t dumps = 0, piles = 0, clears = 0;
      while (std::getline(in, line)) {
        if (line.find("\"dump\"") != std::string::npos) ++dumps;
        if (line.find("\"pile\"") != std::string::npos) ++piles;
        if (line.find("\"clear\"") != std::string::npos) ++clears;
      }
      rep << "\nEvents\n------\ndump: " << dumps << "\npile: " << piles
          << "\nclear: " << clears << "\n";
      any = true;
    }
    if (!any) rep << "\n(no artifacts found in " << cfg.out_dir << ")\n";

    const std::string path = out_path(cfg, "report.txt");
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot write " + path);
    out << rep.str();
    outputs.push_back(path);
    if (!cfg.quiet) std::fputs(rep.str().c_str(), stdout);
  });
}

}  // namespace gvp::app
