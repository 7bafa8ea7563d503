#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>

#include "checks.hpp"
#include "gvp/analytics.hpp"
#include "gvp/geometry.hpp"
#include "gvp/timeutil.hpp"
#include "prop.hpp"
#include "tmpdir.hpp"

using namespace gvp;
using namespace gvp::analytics;

namespace {

constexpr int kTz = 330;  // +05:30

std::int64_t local_ts(int day, int hour, int minute = 0) {
  // UTC timestamp whose local (+05:30) time is day/hour/minute
  return (days_from_civil(2025, 6, 2) + day) * 86400 + hour * 3600 +
         minute * 60 - kTz * 60;
}

std::vector<CoverageSample> constant_series(double value, int days) {
  std::vector<CoverageSample> s;
  for (int d = 0; d < days; ++d)
    for (int h = 0; h < 24; ++h)
      for (int m = 0; m < 60; m += 20)
        s.push_back({local_ts(d, h, m), value, 1});
  return s;
}

}  // namespace

TEST_CASE("coverage_series basics") {
  const RoiPolygon roi = rect_roi(0, 0, 100, 100, 100, 100);
  detect::DetectorConfig cfg;
  detect::DetectionStream stream;
  CHECK(coverage_series(stream, roi, cfg).empty());

  FrameRecord rec;
  rec.frame_id = "a";
  rec.ts = 1000;
  rec.detections = {Detection{BBox{0, 0, 50, 50}, 0.9, 0}};
  stream.frames.push_back(rec);
  const auto series = coverage_series(stream, roi, cfg);
  REQUIRE(series.size() == 1);
  CHECK(series[0].coverage == doctest::Approx(0.25));
  CHECK(series[0].waste_count == 1);
  CHECK(series[0].ts == 1000);
}

TEST_CASE("coverage_series filters confidence and class") {
  const RoiPolygon roi = rect_roi(0, 0, 100, 100, 100, 100);
  detect::DetectorConfig cfg;
  detect::DetectionStream stream;
  FrameRecord rec;
  rec.frame_id = "a";
  rec.ts = 1;
  rec.detections = {Detection{BBox{0, 0, 50, 50}, 0.1, 0},    // below conf
                    Detection{BBox{50, 50, 50, 50}, 0.9, 1}}; // non-waste
  stream.frames.push_back(rec);
  const auto series = coverage_series(stream, roi, cfg);
  CHECK(series[0].coverage == 0.0);
  CHECK(series[0].waste_count == 0);
}

TEST_CASE("coverage_series equals direct geometry on known layouts") {
  Gen gen(51);
  const RoiPolygon roi = rect_roi(0, 0, 700, 395, 700, 395);
  detect::DetectorConfig cfg;
  cfg.confidence_threshold = 0;   // keep everything
  cfg.nms_iou_threshold = 1.01;   // suppress nothing
  detect::DetectionStream stream;
  std::vector<std::vector<BBox>> truth;
  for (int f = 0; f < 50; ++f) {
    FrameRecord rec;
    rec.frame_id = "f" + std::to_string(f);
    rec.ts = 1000 + f * 300;
    std::vector<BBox> boxes;
    const int n = gen.uniform_int(0, 8);
    for (int i = 0; i < n; ++i) {
      const BBox b = gen.real_box(700, 395, 120, 120);
      boxes.push_back(b);
      rec.detections.push_back(Detection{b, gen.unif(0.5, 1.0), 0});
    }
    truth.push_back(boxes);
    stream.frames.push_back(rec);
  }
  const auto series = coverage_series(stream, roi, cfg);
  REQUIRE(series.size() == truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i)
    CHECK(series[i].coverage ==
          doctest::Approx(coverage_fraction(truth[i], roi)).epsilon(1e-9));
}

TEST_CASE("hourly profile of a constant series") {
  const auto series = constant_series(0.39, 2);
  const Profile p = hourly_profile(series, kTz);
  REQUIRE(p.bins.size() == 24);
  for (const ProfileBin& b : p.bins) {
    CHECK(b.count > 0);
    CHECK(b.mean == doctest::Approx(0.39));
    CHECK(b.min == doctest::Approx(0.39));
    CHECK(b.max == doctest::Approx(0.39));
  }
}

TEST_CASE("profiles reject an empty series") {
  CHECK(thrown_code([] { hourly_profile({}, kTz); }) == "EmptySeries");
  CHECK(thrown_code([] { daily_profile({}, kTz); }) == "EmptySeries");
  CHECK(thrown_code([] { weekday_profile({}, kTz); }) == "EmptySeries");
}

TEST_CASE("weekday profile flags empty bins instead of zeroing them") {
  std::vector<CoverageSample> series;
  for (int h = 0; h < 24; ++h) {
    series.push_back({local_ts(0, h), 0.4, 1});  // Monday
    series.push_back({local_ts(1, h), 0.2, 1});  // Tuesday
  }
  const Profile p = weekday_profile(series, kTz);
  REQUIRE(p.bins.size() == 7);
  CHECK(p.bins[0].label == "Mon");
  CHECK(p.bins[0].count == 24);
  CHECK(p.bins[0].mean == doctest::Approx(0.4));
  CHECK(p.bins[1].mean == doctest::Approx(0.2));
  for (int d = 2; d < 7; ++d) CHECK(p.bins[d].count == 0);
}

TEST_CASE("daily profile keys on the local calendar date") {
  std::vector<CoverageSample> series;
  series.push_back({local_ts(0, 23, 50), 0.5, 1});
  series.push_back({local_ts(1, 0, 10), 0.3, 1});  // next local day
  const Profile p = daily_profile(series, kTz);
  REQUIRE(p.bins.size() == 2);
  CHECK(p.bins[0].label == "2025-06-02");
  CHECK(p.bins[1].label == "2025-06-03");
  CHECK(p.bins[0].mean == doctest::Approx(0.5));
  CHECK(p.bins[1].mean == doctest::Approx(0.3));
}

TEST_CASE("profile bins are convex and order-invariant") {
  Gen gen(52);
  for (int c = 0; c < 200; ++c) {
    std::vector<CoverageSample> series;
    const int n = gen.uniform_int(1, 300);
    for (int i = 0; i < n; ++i)
      series.push_back(
          {local_ts(gen.uniform_int(0, 9), gen.uniform_int(0, 23),
                    gen.uniform_int(0, 59)),
           gen.unif(0, 1), 0});
    for (const Profile& p :
         {hourly_profile(series, kTz), weekday_profile(series, kTz),
          daily_profile(series, kTz)}) {
      for (const ProfileBin& b : p.bins) {
        if (b.count == 0) continue;
        CHECK(b.min <= b.mean + 1e-12);
        CHECK(b.mean <= b.max + 1e-12);
        CHECK(b.mean >= 0.0);
        CHECK(b.mean <= 1.0);
      }
    }
    auto shuffled = series;
    std::mt19937_64 rng(c);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const Profile a = hourly_profile(series, kTz);
    const Profile b = hourly_profile(shuffled, kTz);
    for (int h = 0; h < 24; ++h) {
      CHECK(a.bins[h].count == b.bins[h].count);
      if (a.bins[h].count > 0)
        CHECK(a.bins[h].mean == doctest::Approx(b.bins[h].mean).epsilon(1e-12));
    }
  }
}

TEST_CASE("scaling coverage preserves the busiest hour") {
  Gen gen(53);
  for (int c = 0; c < 200; ++c) {
    std::vector<CoverageSample> series;
    for (int h = 0; h < 24; ++h)
      for (int k = 0; k < 3; ++k)
        series.push_back({local_ts(0, h, k * 20), gen.unif(0.01, 1.0), 0});
    const double scale = gen.unif(0.05, 1.0);
    auto scaled = series;
    for (auto& s : scaled) s.coverage *= scale;
    const Profile a = hourly_profile(series, kTz);
    const Profile b = hourly_profile(scaled, kTz);
    const auto argmax = [](const Profile& p) {
      int best = 0;
      for (int h = 1; h < 24; ++h)
        if (p.bins[h].mean > p.bins[best].mean) best = h;
      return best;
    };
    CHECK(argmax(a) == argmax(b));
  }
}

TEST_CASE("detect_events hand traces") {
  SUBCASE("flat series stays quiet") {
    std::vector<CoverageSample> flat;
    for (int i = 0; i < 20; ++i) flat.push_back({i * 300, 0.2, 1});
    CHECK(detect_events(flat).empty());
  }
  SUBCASE("pile then clear over three half-hour samples") {
    const std::vector<CoverageSample> s = {
        {0, 0.30, 5}, {1800, 0.15, 5}, {3600, 0.02, 0}};
    const auto events = detect_events(s);
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == EventKind::pile);
    CHECK(events[0].start_ts == 0);
    CHECK(events[0].end_ts == 1800);
    CHECK(events[1].kind == EventKind::clear);
    CHECK(events[1].start_ts == 1800);
    CHECK(events[1].end_ts == 3600);
  }
  SUBCASE("a fast rise is a dump") {
    const std::vector<CoverageSample> s = {
        {0, 0.00, 0}, {300, 0.03, 1}, {600, 0.08, 3}};
    const auto events = detect_events(s);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == EventKind::dump);
    CHECK(events[0].coverage_after > events[0].coverage_before);
  }
}

TEST_CASE("event triggers respect monotonicity") {
  Gen gen(54);
  for (int c = 0; c < 200; ++c) {
    std::vector<CoverageSample> rising, falling;
    double v = gen.unif(0, 0.2);
    for (int i = 0; i < 30; ++i) {
      rising.push_back({i * 300, v, 0});
      v += gen.unif(0, 0.05);
      v = std::min(v, 1.0);
    }
    double w = gen.unif(0.5, 1.0);
    for (int i = 0; i < 30; ++i) {
      falling.push_back({i * 300, w, 0});
      w -= gen.unif(0, 0.05);
      w = std::max(w, 0.0);
    }
    for (const GvpEvent& e : detect_events(falling))
      CHECK(e.kind != EventKind::dump);
    for (const GvpEvent& e : detect_events(rising)) {
      CHECK(e.kind != EventKind::pile);
      CHECK(e.kind != EventKind::clear);
    }
  }
}

TEST_CASE("merged events of one kind never overlap") {
  Gen gen(55);
  for (int c = 0; c < 200; ++c) {
    std::vector<CoverageSample> series;
    double v = 0.2;
    for (int i = 0; i < 100; ++i) {
      v = std::clamp(v + gen.unif(-0.15, 0.15), 0.0, 1.0);
      series.push_back({i * 300, v, 0});
    }
    const auto events = detect_events(series);
    for (const GvpEvent& e : events) CHECK(e.start_ts < e.end_ts);
    for (std::size_t i = 0; i < events.size(); ++i)
      for (std::size_t j = i + 1; j < events.size(); ++j) {
        if (events[i].kind != events[j].kind) continue;
        const bool disjoint = events[i].end_ts < events[j].start_ts ||
                              events[j].end_ts < events[i].start_ts;
        CHECK(disjoint);
      }
  }
}

TEST_CASE("coverage csv round trip") {
  TempDir dir;
  std::vector<CoverageSample> series = {
      {1000, 0.123456, 3}, {1300, 0.0, 0}, {1600, 1.0, 9}};
  write_coverage_csv(dir.file("c.csv"), series, kTz);
  const auto back = read_coverage_csv(dir.file("c.csv"));
  REQUIRE(back.size() == series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(back[i].ts == series[i].ts);
    CHECK(back[i].coverage == doctest::Approx(series[i].coverage).epsilon(1e-6));
    CHECK(back[i].waste_count == series[i].waste_count);
  }
  // header as documented
  std::ifstream in(dir.file("c.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "ts,iso_time,coverage,count");
}

TEST_CASE("profile exports flag empty bins as no data") {
  TempDir dir;
  std::vector<CoverageSample> series = {{local_ts(0, 5), 0.5, 1}};
  const Profile p = hourly_profile(series, kTz);
  write_profile_csv(dir.file("p.csv"), p);
  write_profile_json(dir.file("p.json"), p);
  std::ifstream csv(dir.file("p.csv"));
  std::string line, all;
  while (std::getline(csv, line)) all += line + "\n";
  CHECK(all.find("05,1,0.500000") != std::string::npos);
  CHECK(all.find("00,0,,,") != std::string::npos);
  std::ifstream js(dir.file("p.json"));
  std::string json((std::istreambuf_iterator<char>(js)),
                   std::istreambuf_iterator<char>());
  CHECK(json.find("null") != std::string::npos);
  CHECK(json.find("\"hourly\"") != std::string::npos);
}
