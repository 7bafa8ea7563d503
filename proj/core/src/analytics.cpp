#include "gvp/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gvp/errors.hpp"
#include "gvp/geometry.hpp"
#include "gvp/timeutil.hpp"

using ordered_json = nlohmann::ordered_json;

namespace gvp::analytics {

std::vector<CoverageSample> coverage_series(
    const detect::DetectionStream& stream, const RoiPolygon& roi,
    const detect::DetectorConfig& cfg, int grid_scale) {
  std::vector<CoverageSample> series;
  series.reserve(stream.frames.size());
  std::vector<BBox> waste_boxes;
  for (const FrameRecord& rec : stream.frames) {
    waste_boxes.clear();
    int count = 0;
    for (const Detection& d : detect::apply_config(rec.detections, cfg)) {
      if (d.class_id != kWasteClass) continue;
      waste_boxes.push_back(d.box);
      ++count;
    }
    series.push_back(CoverageSample{
        rec.ts, coverage_fraction(waste_boxes, roi, grid_scale), count});
  }
  return series;
}

const char* profile_kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::hourly: return "hourly";
    case ProfileKind::daily: return "daily";
    case ProfileKind::weekday: return "weekday";
  }
  return "?";
}

namespace {

void accumulate(ProfileBin& bin, double v) {
  if (bin.count == 0) {
    bin.min = bin.max = v;
    bin.mean = 0;
  }
  bin.min = std::min(bin.min, v);
  bin.max = std::max(bin.max, v);
  bin.mean += v;  // running sum, divided at the end
  ++bin.count;
}

void finish(Profile& p) {
  for (ProfileBin& b : p.bins)
    if (b.count > 0) b.mean /= static_cast<double>(b.count);
}

void require_nonempty(std::span<const CoverageSample> series) {
  if (series.empty()) raise(Errc::empty_series, "coverage series is empty");
}

const char* kWeekdayNames[7] = {"Mon", "Tue", "Wed", "Thu",
                                "Fri", "Sat", "Sun"};

}  // namespace

Profile hourly_profile(std::span<const CoverageSample> series,
                       int tz_offset_min) {
  require_nonempty(series);
  Profile p;
  p.kind = ProfileKind::hourly;
  p.tz_offset_min = tz_offset_min;
  p.bins.resize(24);
  for (int h = 0; h < 24; ++h) {
    char buf[4];
    std::snprintf(buf, sizeof(buf), "%02d", h);
    p.bins[h].label = buf;
  }
  for (const CoverageSample& s : series)
    accumulate(p.bins[local_hour(s.ts, tz_offset_min)], s.coverage);
  finish(p);
  return p;
}

Profile daily_profile(std::span<const CoverageSample> series,
                      int tz_offset_min) {
  require_nonempty(series);
  Profile p;
  p.kind = ProfileKind::daily;
  p.tz_offset_min = tz_offset_min;
  std::int64_t d0 = std::numeric_limits<std::int64_t>::max();
  std::int64_t d1 = std::numeric_limits<std::int64_t>::min();
  for (const CoverageSample& s : series) {
    const std::int64_t d = local_day(s.ts, tz_offset_min);
    d0 = std::min(d0, d);
    d1 = std::max(d1, d);
  }
  p.bins.resize(static_cast<std::size_t>(d1 - d0 + 1));
  for (std::int64_t d = d0; d <= d1; ++d)
    p.bins[static_cast<std::size_t>(d - d0)].label = format_local_date(d);
  for (const CoverageSample& s : series)
    accumulate(
        p.bins[static_cast<std::size_t>(local_day(s.ts, tz_offset_min) - d0)],
        s.coverage);
  finish(p);
  return p;
}

Profile weekday_profile(std::span<const CoverageSample> series,
                        int tz_offset_min) {
  require_nonempty(series);
  Profile p;
  p.kind = ProfileKind::weekday;
  p.tz_offset_min = tz_offset_min;
  p.bins.resize(7);
  for (int d = 0; d < 7; ++d) p.bins[d].label = kWeekdayNames[d];
  for (const CoverageSample& s : series)
    accumulate(p.bins[local_weekday(s.ts, tz_offset_min)], s.coverage);
  finish(p);
  return p;
}

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::dump: return "dump";
    case EventKind::pile: return "pile";
    case EventKind::clear: return "clear";
  }
  return "?";
}

namespace {

struct RawTrigger {
  std::size_t start_idx;
  std::size_t end_idx;
};

std::vector<GvpEvent> merge_triggers(std::vector<RawTrigger>& triggers,
                                     EventKind kind,
                                     std::span<const CoverageSample> series) {
  std::vector<GvpEvent> events;
  if (triggers.empty()) return events;
  std::sort(triggers.begin(), triggers.end(),
            [](const RawTrigger& a, const RawTrigger& b) {
              return a.start_idx != b.start_idx ? a.start_idx < b.start_idx
                                                : a.end_idx < b.end_idx;
            });
  RawTrigger cur = triggers[0];
  auto emit = [&](const RawTrigger& t) {
    events.push_back(GvpEvent{kind, series[t.start_idx].ts,
                              series[t.end_idx].ts,
                              series[t.start_idx].coverage,
                              series[t.end_idx].coverage});
  };
  for (std::size_t i = 1; i < triggers.size(); ++i) {
    if (triggers[i].start_idx <= cur.end_idx) {
      cur.end_idx = std::max(cur.end_idx, triggers[i].end_idx);
    } else {
      emit(cur);
      cur = triggers[i];
    }
  }
  emit(cur);
  return events;
}

bool event_is_consistent(const GvpEvent& e, const EventParams& params) {
  switch (e.kind) {
    case EventKind::dump:
      return e.coverage_after > e.coverage_before;
    case EventKind::pile:
      return e.coverage_after < e.coverage_before;
    case EventKind::clear:
      return e.coverage_after < e.coverage_before &&
             e.coverage_after <= params.clean_level;
  }
  return false;
}

}  // namespace

std::vector<GvpEvent> detect_events(std::span<const CoverageSample> series,
                                    const EventParams& params) {
  std::vector<RawTrigger> dumps, piles, clears;
  for (std::size_t j = 1; j < series.size(); ++j) {
    for (std::size_t i = j; i-- > 0;) {
      if (series[j].ts - series[i].ts > params.window_s) break;
      const double before = series[i].coverage;
      const double after = series[j].coverage;
      if (after - before >= params.rise_abs)
        dumps.push_back(RawTrigger{i, j});
      if (before > 0 && (before - after) / before >= params.drop_rel) {
        if (after <= params.clean_level)
          clears.push_back(RawTrigger{i, j});
        else
          piles.push_back(RawTrigger{i, j});
      }
    }
  }
  std::vector<GvpEvent> events;
  auto append = [&](std::vector<RawTrigger>& triggers, EventKind kind) {
    for (const GvpEvent& e : merge_triggers(triggers, kind, series))
      if (event_is_consistent(e, params)) events.push_back(e);
  };
  append(dumps, EventKind::dump);
  append(piles, EventKind::pile);
  append(clears, EventKind::clear);
  std::sort(events.begin(), events.end(),
            [](const GvpEvent& a, const GvpEvent& b) {
              if (a.start_ts != b.start_ts) return a.start_ts < b.start_ts;
              return static_cast<int>(a.kind) < static_cast<int>(b.kind);
            });
  return events;
}

void write_coverage_csv(const std::string& path,
                        std::span<const CoverageSample> series,
                        int tz_offset_min) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot write coverage csv: " + path);
  out << "ts,iso_time,coverage,count\n";
  char buf[96];
  for (const CoverageSample& s : series) {
    std::snprintf(buf, sizeof(buf), "%lld,%s,%.6f,%d\n",
                  static_cast<long long>(s.ts),
                  format_iso8601(s.ts, tz_offset_min).c_str(), s.coverage,
                  s.waste_count);
    out << buf;
  }
}

std::vector<CoverageSample> read_coverage_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open coverage csv: " + path);
  std::vector<CoverageSample> series;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;  // header
    CoverageSample s;
    long long ts = 0;
    char iso[40];
    if (std::sscanf(line.c_str(), "%lld,%39[^,],%lf,%d", &ts, iso, &s.coverage,
                    &s.waste_count) != 4) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%s:%d: malformed coverage row",
                    path.c_str(), lineno);
      raise(Errc::parse_error, buf);
    }
    s.ts = ts;
    series.push_back(s);
  }
  return series;
}

std::string profile_to_json(const Profile& profile) {
  ordered_json j;
  j["kind"] = profile_kind_name(profile.kind);
  j["tz_offset_min"] = profile.tz_offset_min;
  ordered_json bins = ordered_json::array();
  for (const ProfileBin& b : profile.bins) {
    ordered_json bj;
    bj["label"] = b.label;
    bj["count"] = b.count;
    if (b.count > 0) {
      bj["mean"] = b.mean;
      bj["min"] = b.min;
      bj["max"] = b.max;
    } else {
      bj["mean"] = nullptr;
      bj["min"] = nullptr;
      bj["max"] = nullptr;
    }
    bins.push_back(std::move(bj));
  }
  j["bins"] = std::move(bins);
  return j.dump(2);
}

void write_profile_json(const std::string& path, const Profile& profile) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot write profile json: " + path);
  out << profile_to_json(profile) << '\n';
}

void write_profile_csv(const std::string& path, const Profile& profile) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot write profile csv: " + path);
  out << "label,count,mean,min,max\n";
  char buf[128];
  for (const ProfileBin& b : profile.bins) {
    if (b.count > 0)
      std::snprintf(buf, sizeof(buf), "%s,%ld,%.6f,%.6f,%.6f\n",
                    b.label.c_str(), b.count, b.mean, b.min, b.max);
    else
      std::snprintf(buf, sizeof(buf), "%s,0,,,\n", b.label.c_str());
    out << buf;
  }
}

void write_events_jsonl(const std::string& path,
                        std::span<const GvpEvent> events) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot write events: " + path);
  for (const GvpEvent& e : events) {
    ordered_json j{{"kind", event_kind_name(e.kind)},
                   {"start_ts", e.start_ts},
                   {"end_ts", e.end_ts},
                   {"before", e.coverage_before},
                   {"after", e.coverage_after}};
    out << j.dump() << '\n';
  }
}

}  // namespace gvp::analytics
