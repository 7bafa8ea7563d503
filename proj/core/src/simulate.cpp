#include "gvp/simulate.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "gvp/errors.hpp"
#include "gvp/geometry.hpp"
#include "gvp/timeutil.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace gvp::sim {

namespace {

// Hand-rolled samplers so a seed reproduces bit-identical output on any
// standard library.
struct Rng {
  std::mt19937_64 g;
  double spare = 0;
  bool has_spare = false;

  explicit Rng(std::uint64_t seed) : g(seed) {}

  double unif() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
  double unif(double lo, double hi) { return lo + (hi - lo) * unif(); }

  int poisson(double lambda) {
    if (lambda <= 0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= unif();
    } while (p > limit);
    return k - 1;
  }

  double normal() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u, v, s;
    do {
      u = unif(-1, 1);
      v = unif(-1, 1);
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare = v * m;
    has_spare = true;
    return u * m;
  }

  // Truncation keeps the IoU >= 0.5 survival bound hard; an unbounded tail
  // would occasionally shift a box past the match threshold.
  double truncated_normal(double sigma, double max_sigmas) {
    if (sigma <= 0) return 0;
    for (;;) {
      const double z = normal();
      if (std::abs(z) <= max_sigmas) return z * sigma;
    }
  }
};

constexpr double kJitterTruncSigmas = 1.5;

[[noreturn]] void bad_field(const char* field, const std::string& why) {
  raise(Errc::invalid_config, std::string(field) + ": " + why);
}

bool point_in_polygon(const RoiPolygon& roi, double x, double y) {
  bool inside = false;
  const auto& v = roi.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > y) != (v[j].y > y) &&
        x < (v[j].x - v[i].x) * (y - v[i].y) / (v[j].y - v[i].y) + v[i].x)
      inside = !inside;
  }
  return inside;
}

struct Phase {
  double arrival_rate = 0;  // expected new items this frame
  bool scatter = false;
  bool pile = false;
  bool clear = false;
};

Phase phase_of(const ScenarioConfig& cfg, std::int64_t local_ts) {
  Phase ph;
  const std::int64_t sod = floor_mod(local_ts, 86400);
  const int hour = static_cast<int>(sod / 3600);
  const int wd =
      static_cast<int>(floor_mod(floor_div(local_ts, 86400) + 3, 7));
  ph.arrival_rate = cfg.hourly_rate[hour] * cfg.weekday_multiplier[wd] *
                    cfg.frame_interval_s / 3600.0;
  ph.scatter = sod >= cfg.scatter_start_hour * 3600 &&
               sod < cfg.scatter_end_hour * 3600;
  const std::int64_t clean_lo = cfg.clean_start_hour * 3600;
  const std::int64_t clean_hi = cfg.clean_end_hour * 3600;
  const std::int64_t clean_mid = (clean_lo + clean_hi) / 2;
  ph.pile = sod >= clean_lo && sod < clean_mid;
  ph.clear = sod >= clean_mid && sod < clean_hi;
  return ph;
}

}  // namespace

int frames_per_day(const ScenarioConfig& cfg) {
  return static_cast<int>(86400 / cfg.frame_interval_s);
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.days < 1) bad_field("days", "must be >= 1");
  if (cfg.frame_interval_s <= 0 || 86400 % cfg.frame_interval_s != 0)
    bad_field("frame_interval_s", "must be positive and divide 86400");
  if (cfg.frame_w <= 0 || cfg.frame_h <= 0)
    bad_field("frame_w/frame_h", "must be positive");
  validate_roi(cfg.roi);
  if (cfg.roi.frame_w != cfg.frame_w || cfg.roi.frame_h != cfg.frame_h)
    bad_field("roi", "frame dimensions disagree with the scenario's");
  for (double r : cfg.hourly_rate)
    if (r < 0 || r > 1e5) bad_field("hourly_rate", "must be in [0, 1e5]");
  const ItemSizeRange& s = cfg.item_size;
  if (s.w_min <= 0 || s.h_min <= 0 || s.w_max < s.w_min || s.h_max < s.h_min)
    bad_field("item_size", "need 0 < min <= max");
  double x0 = cfg.roi.vertices[0].x, x1 = x0, y0 = cfg.roi.vertices[0].y,
         y1 = y0;
  for (const Point& p : cfg.roi.vertices) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  if (s.w_max > x1 - x0 || s.h_max > y1 - y0)
    bad_field("item_size", "items larger than the roi");
  if (cfg.scatter_start_hour < 0 || cfg.scatter_end_hour > 24 ||
      cfg.scatter_start_hour > cfg.scatter_end_hour)
    bad_field("scatter hours", "need 0 <= start <= end <= 24");
  if (cfg.scatter_remove_prob < 0 || cfg.scatter_remove_prob > 1)
    bad_field("scatter_remove_prob", "must be in [0,1]");
  if (cfg.clean_start_hour < 0 || cfg.clean_end_hour > 24 ||
      cfg.clean_start_hour > cfg.clean_end_hour)
    bad_field("clean hours", "need 0 <= start <= end <= 24");
  if (cfg.pile_consolidation <= 0 || cfg.pile_consolidation > 1)
    bad_field("pile_consolidation", "must be in (0,1]");
  if (cfg.pile_min_coverage < 0 || cfg.pile_min_coverage > 1)
    bad_field("pile_min_coverage", "must be in [0,1]");
  for (double m : cfg.weekday_multiplier)
    if (m < 0) bad_field("weekday_multiplier", "must be >= 0");
  if (cfg.noise.p_miss < 0 || cfg.noise.p_miss > 1)
    bad_field("noise.p_miss", "must be in [0,1]");
  if (cfg.noise.clutter_rate < 0 || cfg.noise.clutter_rate > 1e5)
    bad_field("noise.clutter_rate", "must be in [0, 1e5]");
  if (cfg.noise.jitter_sigma < 0)
    bad_field("noise.jitter_sigma", "must be >= 0");
  if (cfg.real_conf_lo < 0 || cfg.real_conf_hi > 1 ||
      cfg.real_conf_lo > cfg.real_conf_hi)
    bad_field("real_conf", "need 0 <= lo <= hi <= 1");
  if (cfg.clutter_conf_lo < 0 || cfg.clutter_conf_hi > 1 ||
      cfg.clutter_conf_lo > cfg.clutter_conf_hi)
    bad_field("clutter_conf", "need 0 <= lo <= hi <= 1");
  if (cfg.noise.clutter_rate > 0 && cfg.clutter_conf_hi > cfg.real_conf_lo)
    bad_field("clutter_conf", "clutter band must sit below the real-box band");
  if (cfg.start_month < 1 || cfg.start_month > 12 || cfg.start_day < 1 ||
      cfg.start_day > 31)
    bad_field("start date", "not a calendar date");
}

namespace {

struct Item {
  BBox box;
};

struct RoiRect {
  double x0, y0, x1, y1;
  bool exact;  // axis-aligned rectangle
};

RoiRect roi_bounds(const RoiPolygon& roi) {
  BBox rect;
  const bool exact = is_axis_aligned_rect(roi, &rect);
  if (exact) return RoiRect{rect.x, rect.y, rect.x2(), rect.y2(), true};
  double x0 = roi.vertices[0].x, x1 = x0, y0 = roi.vertices[0].y, y1 = y0;
  for (const Point& p : roi.vertices) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return RoiRect{x0, y0, x1, y1, false};
}

Item spawn_item(const ScenarioConfig& cfg, const RoiRect& rr, Rng& rng) {
  Item it;
  it.box.w = rng.unif(cfg.item_size.w_min, cfg.item_size.w_max);
  it.box.h = rng.unif(cfg.item_size.h_min, cfg.item_size.h_max);
  for (int tries = 0; tries < 256; ++tries) {
    it.box.x = rng.unif(rr.x0, rr.x1 - it.box.w);
    it.box.y = rng.unif(rr.y0, rr.y1 - it.box.h);
    if (rr.exact ||
        point_in_polygon(cfg.roi, it.box.x + it.box.w / 2,
                         it.box.y + it.box.h / 2))
      break;
  }
  return it;
}

std::vector<BBox> item_boxes(const std::vector<Item>& items) {
  std::vector<BBox> boxes;
  boxes.reserve(items.size());
  for (const Item& it : items) boxes.push_back(it.box);
  return boxes;
}

// Expected fraction of the pile region the stacked items end up covering.
constexpr double kPileFill = 0.85;

// Consolidates every item into one compact region. The region's footprint is
// the consolidation fraction of the pre-pile union, floored at
// pile_min_coverage of the ROI so the pile stays clearly distinguishable from
// a cleared site. The region never exceeds the old union's area, so the pile
// step cannot grow coverage; days with too little waste skip the phase.
bool pile_items(const ScenarioConfig& cfg, const RoiRect& rr,
                std::vector<Item>& items, Rng& rng, double& area_before,
                double& area_after) {
  area_before = union_area(item_boxes(items));
  if (area_before <= 0) return false;
  double maxw = 0, maxh = 0, max_area = 0;
  std::size_t anchor = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    maxw = std::max(maxw, items[i].box.w);
    maxh = std::max(maxh, items[i].box.h);
    if (items[i].box.area() > max_area) {
      max_area = items[i].box.area();
      anchor = i;
    }
  }
  const double target_after =
      std::max(cfg.pile_consolidation * area_before,
               cfg.pile_min_coverage * polygon_area(cfg.roi));
  const double region_area = target_after / kPileFill;
  if (region_area > area_before) return false;
  double rw = std::max(maxw, std::sqrt(region_area * (maxw / maxh)));
  rw = std::min(rw, rr.x1 - rr.x0);
  double rh = std::max(maxh, region_area / rw);
  rh = std::min(rh, rr.y1 - rr.y0);
  if (rw * rh > area_before) return false;

  const double acx = items[anchor].box.x + items[anchor].box.w / 2;
  const double acy = items[anchor].box.y + items[anchor].box.h / 2;
  const double px = std::clamp(acx - rw / 2, rr.x0, rr.x1 - rw);
  const double py = std::clamp(acy - rh / 2, rr.y0, rr.y1 - rh);

  std::vector<BBox> saved = item_boxes(items);
  for (Item& it : items) {
    it.box.x = px + rng.unif() * (rw - it.box.w);
    it.box.y = py + rng.unif() * (rh - it.box.h);
  }
  area_after = union_area(item_boxes(items));
  if (area_after > area_before) {  // cannot happen, kept as a hard guard
    for (std::size_t i = 0; i < items.size(); ++i) items[i].box = saved[i];
    return false;
  }
  return true;
}

}  // namespace

ScenarioOutput generate(const ScenarioConfig& cfg) {
  validate(cfg);
  Rng world(cfg.seed);
  Rng noise(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const RoiRect rr = roi_bounds(cfg.roi);
  const int fpd = frames_per_day(cfg);
  const std::int64_t interval = cfg.frame_interval_s;
  const std::int64_t local_mid0 =
      days_from_civil(cfg.start_year, static_cast<unsigned>(cfg.start_month),
                      static_cast<unsigned>(cfg.start_day)) *
      86400;
  const std::int64_t tz = static_cast<std::int64_t>(cfg.tz_offset_min) * 60;

  ScenarioOutput out;
  out.ground_truth.class_names = {"waste", "non-waste"};

  std::vector<Item> items;
  std::int64_t piled_day = INT64_MIN, cleared_day = INT64_MIN;

  bool dump_run_open = false;
  std::int64_t dump_start_ts = 0, dump_end_ts = 0;
  double dump_before = 0, prev_coverage = 0;
  auto close_dump_run = [&](double after) {
    if (!dump_run_open) return;
    dump_run_open = false;
    out.events.push_back(analytics::GvpEvent{analytics::EventKind::dump,
                                             dump_start_ts, dump_end_ts,
                                             dump_before, after});
  };

  // Frame f = -fpd .. -1 is the warm-up day, emitted frames start at 0.
  for (std::int64_t f = -fpd; f < static_cast<std::int64_t>(cfg.days) * fpd;
       ++f) {
    const std::int64_t local_ts = local_mid0 + f * interval;
    const std::int64_t ts = local_ts - tz;
    const std::int64_t lday = floor_div(local_ts, 86400);
    const bool emitted = f >= 0;
    const Phase ph = phase_of(cfg, local_ts);

    const int arrivals = world.poisson(ph.arrival_rate);
    for (int a = 0; a < arrivals; ++a)
      items.push_back(spawn_item(cfg, rr, world));

    if (ph.scatter && cfg.scatter_remove_prob > 0) {
      std::erase_if(items, [&](const Item&) {
        return world.unif() < cfg.scatter_remove_prob;
      });
    }

    if (ph.pile && lday != piled_day && !items.empty()) {
      piled_day = lday;
      double before = 0, after = 0;
      if (pile_items(cfg, rr, items, world, before, after) && emitted &&
          after < before) {
        const double roi_area = polygon_area(cfg.roi);
        out.events.push_back(analytics::GvpEvent{
            analytics::EventKind::pile, ts - interval, ts, before / roi_area,
            after / roi_area});
      }
    }

    if (ph.clear && lday != cleared_day) {
      cleared_day = lday;
      if (!items.empty()) {
        if (emitted) {
          const double before =
              coverage_fraction(item_boxes(items), cfg.roi, 1);
          out.events.push_back(analytics::GvpEvent{
              analytics::EventKind::clear, ts - interval, ts, before, 0.0});
        }
        items.clear();
      }
    }

    if (!emitted) continue;

    // ground truth snapshot
    const std::string frame_id = format_frame_timestamp(ts);
    std::vector<dataset::LabeledBox> labels;
    labels.reserve(items.size());
    for (const Item& it : items)
      labels.push_back(dataset::LabeledBox{
          kWasteClass, pixel_to_norm(it.box, cfg.frame_w, cfg.frame_h)});
    out.total_gt_boxes += static_cast<long>(items.size());
    out.ground_truth.labels.emplace(frame_id, std::move(labels));

    const double coverage = coverage_fraction(item_boxes(items), cfg.roi, 1);
    out.truth_coverage.push_back(
        analytics::CoverageSample{ts, coverage, static_cast<int>(items.size())});

    if (arrivals > 0) {
      if (!dump_run_open) {
        dump_run_open = true;
        dump_start_ts = ts - interval;
        dump_before = prev_coverage;
      }
      dump_end_ts = ts;
    } else {
      close_dump_run(prev_coverage);
    }
    prev_coverage = coverage;

    // simulated detector output
    FrameRecord rec;
    rec.frame_id = frame_id;
    rec.ts = ts;
    for (const Item& it : items) {
      if (noise.unif() < cfg.noise.p_miss) continue;
      Detection d;
      d.box = it.box;
      if (cfg.noise.jitter_sigma > 0) {
        d.box.x +=
            noise.truncated_normal(cfg.noise.jitter_sigma, kJitterTruncSigmas);
        d.box.y +=
            noise.truncated_normal(cfg.noise.jitter_sigma, kJitterTruncSigmas);
        d.box = clip_box(d.box, cfg.frame_w, cfg.frame_h);
      }
      d.confidence = noise.unif(cfg.real_conf_lo, cfg.real_conf_hi);
      d.class_id = kWasteClass;
      rec.detections.push_back(d);
    }
    const int n_clutter = noise.poisson(cfg.noise.clutter_rate);
    for (int c = 0; c < n_clutter; ++c) {
      Detection d;
      d.box.w = noise.unif(cfg.item_size.w_min, cfg.item_size.w_max);
      d.box.h = noise.unif(cfg.item_size.h_min, cfg.item_size.h_max);
      d.box.x = noise.unif(0, cfg.frame_w - d.box.w);
      d.box.y = noise.unif(0, cfg.frame_h - d.box.h);
      d.confidence = noise.unif(cfg.clutter_conf_lo, cfg.clutter_conf_hi);
      d.class_id = kWasteClass;
      rec.detections.push_back(d);
    }
    out.total_detections += static_cast<long>(rec.detections.size());
    out.detections.frames.push_back(std::move(rec));
  }
  close_dump_run(prev_coverage);
  return out;
}

double expected_gt_boxes(const ScenarioConfig& cfg) {
  validate(cfg);
  const int fpd = frames_per_day(cfg);
  const std::int64_t local_mid0 =
      days_from_civil(cfg.start_year, static_cast<unsigned>(cfg.start_month),
                      static_cast<unsigned>(cfg.start_day)) *
      86400;
  double expected = 0.0;
  double n = 0.0;
  std::int64_t cleared_day = INT64_MIN;
  for (std::int64_t f = -fpd; f < static_cast<std::int64_t>(cfg.days) * fpd;
       ++f) {
    const std::int64_t local_ts = local_mid0 + f * cfg.frame_interval_s;
    const std::int64_t lday = floor_div(local_ts, 86400);
    const Phase ph = phase_of(cfg, local_ts);
    n += ph.arrival_rate;
    if (ph.scatter) n *= 1.0 - cfg.scatter_remove_prob;
    if (ph.clear && lday != cleared_day) {
      cleared_day = lday;
      n = 0.0;
    }
    if (f >= 0) expected += n;
  }
  return expected;
}

std::pair<double, double> expected_metrics(const ScenarioConfig& cfg) {
  const double min_dim = std::min(cfg.item_size.w_min, cfg.item_size.h_min);
  if (cfg.noise.jitter_sigma > min_dim / 10.0) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "jitter_sigma %.3g exceeds min(item w,h)/10 = %.3g",
                  cfg.noise.jitter_sigma, min_dim / 10.0);
    raise(Errc::sigma_too_large, buf);
  }
  const double recall = 1.0 - cfg.noise.p_miss;
  const double g = expected_gt_boxes(cfg);
  const double frames =
      static_cast<double>(cfg.days) * frames_per_day(cfg);
  const double e_tp = recall * g;
  const double e_fp = cfg.noise.clutter_rate * frames;
  const double precision = e_tp + e_fp > 0 ? e_tp / (e_tp + e_fp) : 1.0;
  return {precision, recall};
}

void tune_noise(ScenarioConfig& cfg, double target_precision,
                double target_recall) {
  if (target_recall <= 0 || target_recall > 1)
    bad_field("target_recall", "must be in (0,1]");
  if (target_precision <= 0 || target_precision > 1)
    bad_field("target_precision", "must be in (0,1]");
  cfg.noise.p_miss = 1.0 - target_recall;
  if (target_precision >= 1.0) {
    cfg.noise.clutter_rate = 0.0;
    return;
  }
  const double g = expected_gt_boxes(cfg);
  const double frames = static_cast<double>(cfg.days) * frames_per_day(cfg);
  cfg.noise.clutter_rate = (1.0 - target_precision) / target_precision *
                           target_recall * g / frames;
}

double calibrate_daily_rate(const ScenarioConfig& cfg, double target) {
  if (target <= 0 || target >= 1)
    bad_field("night_coverage", "must be in (0,1)");
  BBox rect;
  if (!is_axis_aligned_rect(cfg.roi, &rect))
    bad_field("roi", "rate calibration requires a rectangular roi");

  // Per-axis probability that a uniformly placed item covers a given pixel
  // center, averaged over the size distribution. Separable in x and y.
  auto axis_profile = [](double lo, double hi, double smin, double smax) {
    const int kSizeSteps = 48;
    const double span = hi - lo;
    const int cells = std::max(1, static_cast<int>(span));
    const double step = span / cells;
    std::vector<double> q(cells, 0.0);
    for (int i = 0; i < cells; ++i) {
      const double p = lo + (i + 0.5) * step;
      double acc = 0.0;
      for (int k = 0; k < kSizeSteps; ++k) {
        const double s = smin + (smax - smin) * (k + 0.5) / kSizeSteps;
        const double range = span - s;
        if (range <= 0) {
          acc += 1.0;
          continue;
        }
        const double len =
            std::min(p, hi - s) - std::max(p - s, lo);
        acc += std::max(0.0, len) / range;
      }
      q[i] = acc / kSizeSteps;
    }
    return q;
  };
  std::vector<double> qx = axis_profile(rect.x, rect.x2(), cfg.item_size.w_min,
                                        cfg.item_size.w_max);
  std::vector<double> qy = axis_profile(rect.y, rect.y2(), cfg.item_size.h_min,
                                        cfg.item_size.h_max);
  // decimate to keep the bisection cheap
  auto decimate = [](std::vector<double>& q) {
    while (q.size() > 512) {
      std::vector<double> half((q.size() + 1) / 2);
      for (std::size_t i = 0; i < half.size(); ++i) {
        const std::size_t j = 2 * i;
        half[i] = j + 1 < q.size() ? (q[j] + q[j + 1]) / 2 : q[j];
      }
      q.swap(half);
    }
  };
  decimate(qx);
  decimate(qy);

  std::vector<double> multipliers(cfg.weekday_multiplier.begin(),
                                  cfg.weekday_multiplier.end());
  auto expected_cov = [&](double mu) {
    double day_sum = 0.0;
    for (double m : multipliers) {
      double s = 0.0;
      for (double a : qx)
        for (double b : qy) s += std::exp(-mu * m * a * b);
      day_sum += 1.0 - s / (static_cast<double>(qx.size()) * qy.size());
    }
    return day_sum / multipliers.size();
  };

  double lo = 0.0, hi = 64.0;
  int guard = 0;
  while (expected_cov(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 24)
      bad_field("night_coverage", "target unreachable with this item size");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = (lo + hi) / 2.0;
    if (expected_cov(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2.0;
}

ScenarioConfig night_peak_scenario(double night_coverage, int days,
                                   std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.days = days;
  cfg.seed = seed;
  cfg.roi = full_frame_roi(cfg.frame_w, cfg.frame_h);
  const double mu = calibrate_daily_rate(cfg, night_coverage);
  // evening ramp from 15:00, peak 23:00-24:00, nothing past midnight
  const double weights[24] = {0, 0,    0,    0,    0,    0,    0,    0,
                              0, 0,    0,    0,    0,    0,    0,    0.03,
                              0.04, 0.05, 0.06, 0.08, 0.12, 0.15, 0.20, 0.27};
  for (int h = 0; h < 24; ++h) cfg.hourly_rate[h] = mu * weights[h];
  return cfg;
}

void write_output(const std::string& out_dir, const ScenarioConfig& cfg,
                  const ScenarioOutput& out, bool write_frames) {
  fs::create_directories(out_dir);
  const fs::path base(out_dir);
  const fs::path labels_dir = base / "labels";
  fs::create_directories(labels_dir);
  for (const auto& [frame_id, boxes] : out.ground_truth.labels)
    dataset::write_yolo_labels((labels_dir / (frame_id + ".txt")).string(),
                               boxes);
  detect::write_detections((base / "detections.jsonl").string(),
                           out.detections);
  analytics::write_coverage_csv((base / "coverage_truth.csv").string(),
                                out.truth_coverage, cfg.tz_offset_min);
  analytics::write_events_jsonl((base / "events_truth.jsonl").string(),
                                out.events);
  std::ofstream cfg_out(base / "scenario.json", std::ios::trunc);
  if (!cfg_out)
    raise(Errc::io_error, "cannot write scenario.json under " + out_dir);
  cfg_out << config_to_json(cfg) << '\n';
  if (write_frames) {
    const fs::path frames_dir = base / "frames";
    fs::create_directories(frames_dir);
    for (const FrameRecord& rec : out.detections.frames)
      std::ofstream(frames_dir / (rec.frame_id + ".jpg"));
  }
}

std::string config_to_json(const ScenarioConfig& cfg) {
  ordered_json j;
  j["days"] = cfg.days;
  j["frame_interval_s"] = cfg.frame_interval_s;
  j["frame_w"] = cfg.frame_w;
  j["frame_h"] = cfg.frame_h;
  ordered_json verts = ordered_json::array();
  for (const Point& p : cfg.roi.vertices)
    verts.push_back(ordered_json::array({p.x, p.y}));
  j["roi"] = std::move(verts);
  j["hourly_rate"] = cfg.hourly_rate;
  j["item_size"] = ordered_json{{"w_min", cfg.item_size.w_min},
                                {"w_max", cfg.item_size.w_max},
                                {"h_min", cfg.item_size.h_min},
                                {"h_max", cfg.item_size.h_max}};
  j["scatter"] = ordered_json{{"start_hour", cfg.scatter_start_hour},
                              {"end_hour", cfg.scatter_end_hour},
                              {"remove_prob", cfg.scatter_remove_prob}};
  j["clean"] = ordered_json{{"start_hour", cfg.clean_start_hour},
                            {"end_hour", cfg.clean_end_hour},
                            {"pile_consolidation", cfg.pile_consolidation},
                            {"pile_min_coverage", cfg.pile_min_coverage}};
  j["weekday_multiplier"] = cfg.weekday_multiplier;
  j["noise"] = ordered_json{{"p_miss", cfg.noise.p_miss},
                            {"clutter_rate", cfg.noise.clutter_rate},
                            {"jitter_sigma", cfg.noise.jitter_sigma}};
  j["real_conf"] =
      ordered_json::array({cfg.real_conf_lo, cfg.real_conf_hi});
  j["clutter_conf"] =
      ordered_json::array({cfg.clutter_conf_lo, cfg.clutter_conf_hi});
  j["tz_offset_min"] = cfg.tz_offset_min;
  char date[16];
  std::snprintf(date, sizeof(date), "%04d-%02d-%02d", cfg.start_year,
                cfg.start_month, cfg.start_day);
  j["start_date"] = date;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

}  // namespace gvp::sim
