// gvp: turn timestamped frames + box detections into ROI coverage series,
// behavioral profiles, dump/clean events and detection-quality reports, with
// a synthetic scenario generator for end-to-end testing.
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gvp/app.hpp"
#include "gvp/simulate.hpp"
#include "gvp/timeutil.hpp"

namespace {

bool parse_date(const std::string& s, int& y, int& m, int& d) {
  return std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) == 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Garbage-vulnerable-point monitoring pipeline: coverage analytics, "
      "behavioral profiles, event detection and detector evaluation."};
  app.set_version_flag("--version", "gvp 0.1.0");
  app.fallthrough();
  app.set_config("--config", "", "Read options from a config file");
  app.require_subcommand(1);

  gvp::app::AppConfig cfg;
  app.add_option("--frames", cfg.frames_dir,
                 "Directory of YYYYMMDD_HHMMSS.(jpg|png) frames");
  app.add_option("--labels", cfg.labels_dir,
                 "Directory of YOLO label files (<frame_id>.txt)");
  app.add_option("--detections", cfg.detections_path,
                 "Line-oriented JSON detections file");
  app.add_option("--frames-list", cfg.frames_list,
                 "Frame list file (output of `sample`)");
  app.add_option("--out", cfg.out_dir, "Output directory")
      ->capture_default_str();
  app.add_option("--roi", cfg.roi_spec,
                 "ROI spec: rect:x,y,w,h or poly:x1,y1;x2,y2;... "
                 "(default: full frame)");
  app.add_option("--frame-w", cfg.frame_w, "Frame width in px")
      ->capture_default_str();
  app.add_option("--frame-h", cfg.frame_h, "Frame height in px")
      ->capture_default_str();
  app.add_option("--classes", cfg.class_names, "Class names in id order")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--conf", cfg.detector.confidence_threshold,
                 "Detection confidence threshold")
      ->capture_default_str();
  app.add_option("--nms-iou", cfg.detector.nms_iou_threshold,
                 "NMS IoU threshold")
      ->capture_default_str();
  std::vector<int> class_filter;
  app.add_option("--class-filter", class_filter,
                 "Keep only these class ids (default: all)")
      ->delimiter(',');
  app.add_option("--adapter", cfg.detector.adapter_cmd,
                 "External detector command (line protocol over stdin/stdout)");
  app.add_option("--grid-scale", cfg.grid_scale,
                 "Rasterization cells per pixel for non-rectangular ROIs")
      ->capture_default_str();
  app.add_option("--tz-offset", cfg.tz_offset_min,
                 "Local time offset in minutes (default +05:30)")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for all randomized steps")
      ->capture_default_str();
  app.add_flag("--quiet", cfg.quiet, "Suppress progress output");
  app.add_option("--drop-rel", cfg.events.drop_rel,
                 "Relative coverage drop that triggers pile/clear")
      ->capture_default_str();
  app.add_option("--rise-abs", cfg.events.rise_abs,
                 "Absolute coverage rise that triggers a dump")
      ->capture_default_str();
  app.add_option("--clean-level", cfg.events.clean_level,
                 "Coverage at or below this after a drop means clear")
      ->capture_default_str();
  app.add_option("--window", cfg.events.window_s,
                 "Event detection window in seconds")
      ->capture_default_str();

  int rc = 0;
  std::function<void()> action;

  auto* sample = app.add_subcommand("sample", "Sample frames at an interval");
  std::int64_t interval_s = 300;
  sample->add_option("--interval", interval_s, "Sampling interval in seconds")
      ->capture_default_str();
  sample->callback([&] { action = [&] { rc = gvp::app::cmd_sample(cfg, interval_s); }; });

  auto* prep =
      app.add_subcommand("prep", "Split annotations and add flip augmentation");
  double train_fraction = 0.8;
  std::size_t flip_count = 0;
  prep->add_option("--train-fraction", train_fraction, "Train split fraction")
      ->capture_default_str();
  prep->add_option("--flip-count", flip_count,
                   "Horizontally flipped copies to add")
      ->capture_default_str();
  prep->callback([&] {
    action = [&] { rc = gvp::app::cmd_prep(cfg, train_fraction, flip_count); };
  });

  auto* det = app.add_subcommand(
      "detect", "Run the adapter (or validate a detections file)");
  det->callback([&] { action = [&] { rc = gvp::app::cmd_detect(cfg); }; });

  auto* coverage =
      app.add_subcommand("coverage", "Emit the ROI coverage time series");
  coverage->callback([&] { action = [&] { rc = gvp::app::cmd_coverage(cfg); }; });

  auto* ev = app.add_subcommand("eval", "Detection-quality metrics vs labels");
  std::string model_name = "detections";
  ev->add_option("--model-name", model_name, "Row label for the text table")
      ->capture_default_str();
  ev->callback([&] { action = [&] { rc = gvp::app::cmd_eval(cfg, model_name); }; });

  auto* profile =
      app.add_subcommand("profile", "Hourly/daily/weekday coverage profile");
  std::string kind = "hourly";
  profile->add_option("--kind", kind, "hourly, daily or weekday")
      ->capture_default_str();
  profile->callback([&] { action = [&] { rc = gvp::app::cmd_profile(cfg, kind); }; });

  auto* events =
      app.add_subcommand("events", "Detect dump/pile/clear events");
  events->callback([&] { action = [&] { rc = gvp::app::cmd_events(cfg); }; });

  auto* simulate =
      app.add_subcommand("simulate", "Generate a synthetic scenario");
  int days = 60;
  double night_coverage = 0.39;
  double target_precision = 0, target_recall = 0;
  gvp::sim::DetectorNoise noise;
  double scatter_remove = -1, consolidation = -1, pile_min = -1;
  int sim_interval = 300;
  std::string start_date;
  std::vector<double> rates, weekday_mult;
  std::vector<double> item_w, item_h;
  bool write_frames = false;
  simulate->add_option("--days", days, "Days to simulate")
      ->capture_default_str();
  simulate->add_option("--interval", sim_interval, "Frame interval in seconds")
      ->capture_default_str();
  simulate->add_option("--night-coverage", night_coverage,
                       "Overnight coverage plateau the rates are fit to")
      ->capture_default_str();
  simulate->add_option("--precision", target_precision,
                       "Tune clutter so expected precision hits this");
  simulate->add_option("--recall", target_recall,
                       "Tune misses so expected recall hits this");
  simulate->add_option("--p-miss", noise.p_miss,
                       "Probability of dropping a ground-truth box");
  simulate->add_option("--clutter-rate", noise.clutter_rate,
                       "Poisson false alarms per frame");
  simulate->add_option("--jitter-sigma", noise.jitter_sigma,
                       "Box jitter sigma in px");
  simulate->add_option("--scatter-remove-prob", scatter_remove,
                       "Per-step removal probability in the scatter window");
  simulate->add_option("--consolidation", consolidation,
                       "Pile footprint as a fraction of the pre-pile union");
  simulate->add_option("--pile-min-coverage", pile_min,
                       "Coverage floor below which the pile phase is skipped");
  simulate->add_option("--rates", rates,
                       "24 comma-separated expected items/hour")
      ->delimiter(',');
  simulate->add_option("--weekday-mult", weekday_mult,
                       "7 comma-separated multipliers, Monday first")
      ->delimiter(',');
  simulate->add_option("--item-w", item_w, "Item width range: min,max")
      ->delimiter(',');
  simulate->add_option("--item-h", item_h, "Item height range: min,max")
      ->delimiter(',');
  simulate->add_option("--start-date", start_date,
                       "First emitted local day, YYYY-MM-DD");
  simulate->add_flag("--write-frames", write_frames,
                     "Also write placeholder frame images");
  simulate->callback([&] {
    action = [&] {
    try {
      gvp::sim::ScenarioConfig sc =
          gvp::sim::night_peak_scenario(night_coverage, days, cfg.seed);
      sc.frame_interval_s = sim_interval;
      sc.tz_offset_min = cfg.tz_offset_min;
      if (!cfg.roi_spec.empty())
        sc.roi = gvp::app::parse_roi(cfg.roi_spec, sc.frame_w, sc.frame_h);
      if (!rates.empty()) {
        if (rates.size() != 24)
          gvp::raise(gvp::Errc::invalid_config, "--rates needs 24 values");
        for (int h = 0; h < 24; ++h) sc.hourly_rate[h] = rates[h];
      }
      if (!weekday_mult.empty()) {
        if (weekday_mult.size() != 7)
          gvp::raise(gvp::Errc::invalid_config,
                     "--weekday-mult needs 7 values");
        for (int d = 0; d < 7; ++d) sc.weekday_multiplier[d] = weekday_mult[d];
      }
      if (!item_w.empty()) {
        if (item_w.size() != 2)
          gvp::raise(gvp::Errc::invalid_config, "--item-w needs min,max");
        sc.item_size.w_min = item_w[0];
        sc.item_size.w_max = item_w[1];
      }
      if (!item_h.empty()) {
        if (item_h.size() != 2)
          gvp::raise(gvp::Errc::invalid_config, "--item-h needs min,max");
        sc.item_size.h_min = item_h[0];
        sc.item_size.h_max = item_h[1];
      }
      if (scatter_remove >= 0) sc.scatter_remove_prob = scatter_remove;
      if (consolidation >= 0) sc.pile_consolidation = consolidation;
      if (pile_min >= 0) sc.pile_min_coverage = pile_min;
      if (!start_date.empty() &&
          !parse_date(start_date, sc.start_year, sc.start_month, sc.start_day))
        gvp::raise(gvp::Errc::invalid_config,
                   "--start-date must be YYYY-MM-DD");
      sc.noise = noise;
      if (target_precision > 0 || target_recall > 0) {
        const double p = target_precision > 0 ? target_precision : 1.0;
        const double r = target_recall > 0 ? target_recall : 1.0;
        gvp::sim::tune_noise(sc, p, r);
      }
      rc = gvp::app::cmd_simulate(cfg, sc, write_frames);
    } catch (const gvp::Error& e) {
      std::fprintf(stderr, "gvp simulate: error: %s\n", e.what());
      rc = gvp::app::exit_code_for(e.code());
    }
    };
  });

  auto* report =
      app.add_subcommand("report", "Summarize artifacts in the output dir");
  report->callback([&] { action = [&] { rc = gvp::app::cmd_report(cfg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gvp::app::kExitValidation;
  }
  if (!class_filter.empty())
    cfg.detector.class_filter =
        std::set<int>(class_filter.begin(), class_filter.end());
  if (action) action();
  return rc;
}
