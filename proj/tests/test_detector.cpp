#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "checks.hpp"
#include "gvp/detector.hpp"
#include "gvp/geometry.hpp"
#include "oracles.hpp"
#include "prop.hpp"
#include "tmpdir.hpp"

using namespace gvp;
using namespace gvp::detect;

namespace {

Detection det(double x, double y, double w, double h, double conf,
              int cls = 0) {
  return Detection{BBox{x, y, w, h}, conf, cls};
}

}  // namespace

TEST_CASE("load_detections parses and validates") {
  TempDir dir;
  SUBCASE("valid stream") {
    std::ofstream(dir.file("d.jsonl"))
        << R"({"frame_id":"a","ts":100,"boxes":[{"x":1,"y":2,"w":3,"h":4,"conf":0.9,"cls":0}]})"
        << "\n"
        << R"({"frame_id":"b","ts":200,"boxes":[]})" << "\n"
        << R"({"frame_id":"c","ts":300,"boxes":[]})" << "\n";
    const DetectionStream s = load_detections(dir.file("d.jsonl"));
    REQUIRE(s.frames.size() == 3);
    CHECK(s.frames[0].detections.size() == 1);
    CHECK(s.frames[0].detections[0].box.w == 3.0);
    CHECK(s.frames[1].detections.empty());
  }
  SUBCASE("empty file") {
    std::ofstream{dir.file("e.jsonl")};
    CHECK(load_detections(dir.file("e.jsonl")).frames.empty());
  }
  SUBCASE("out-of-order timestamps") {
    std::ofstream(dir.file("o.jsonl"))
        << R"({"frame_id":"a","ts":200,"boxes":[]})" << "\n"
        << R"({"frame_id":"b","ts":100,"boxes":[]})" << "\n";
    CHECK(thrown_code([&] { load_detections(dir.file("o.jsonl")); }) ==
          "NonMonotonicTimestamps");
  }
  SUBCASE("duplicate frame ids") {
    std::ofstream(dir.file("dup.jsonl"))
        << R"({"frame_id":"a","ts":100,"boxes":[]})" << "\n"
        << R"({"frame_id":"a","ts":200,"boxes":[]})" << "\n";
    CHECK(thrown_code([&] { load_detections(dir.file("dup.jsonl")); }) ==
          "DuplicateFrameId");
  }
  SUBCASE("parse errors carry the line number") {
    std::ofstream(dir.file("bad.jsonl"))
        << R"({"frame_id":"a","ts":100,"boxes":[]})" << "\n"
        << "not json\n";
    try {
      load_detections(dir.file("bad.jsonl"));
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  SUBCASE("confidence outside [0,1] is rejected") {
    std::ofstream(dir.file("c.jsonl"))
        << R"({"frame_id":"a","ts":1,"boxes":[{"x":0,"y":0,"w":1,"h":1,"conf":1.5,"cls":0}]})"
        << "\n";
    CHECK(thrown_code([&] { load_detections(dir.file("c.jsonl")); }) ==
          "ParseError");
  }
  SUBCASE("write-read round trip") {
    DetectionStream s;
    Gen gen(3);
    for (int f = 0; f < 5; ++f) {
      FrameRecord rec;
      rec.frame_id = "f" + std::to_string(f);
      rec.ts = 100 + f;
      for (int i = 0; i < 4; ++i) {
        Detection d;
        d.box = gen.real_box(700, 395, 80, 80);
        d.confidence = gen.unif(0, 1);
        d.class_id = gen.uniform_int(0, 1);
        rec.detections.push_back(d);
      }
      s.frames.push_back(rec);
    }
    write_detections(dir.file("rt.jsonl"), s);
    const DetectionStream back = load_detections(dir.file("rt.jsonl"));
    REQUIRE(back.frames.size() == s.frames.size());
    for (std::size_t f = 0; f < s.frames.size(); ++f) {
      CHECK(back.frames[f].frame_id == s.frames[f].frame_id);
      REQUIRE(back.frames[f].detections.size() ==
              s.frames[f].detections.size());
      for (std::size_t i = 0; i < s.frames[f].detections.size(); ++i)
        CHECK(back.frames[f].detections[i].box.x ==
              s.frames[f].detections[i].box.x);
    }
  }
}

TEST_CASE("nms keeps the confident box of a duplicate pair") {
  const std::vector<Detection> dets = {det(0, 0, 10, 10, 0.9),
                                       det(0, 0, 10, 10, 0.8)};
  const auto kept = nms(dets, 0.5);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].confidence == 0.9);
}

TEST_CASE("nms keeps disjoint boxes and separates classes") {
  const std::vector<Detection> disjoint = {det(0, 0, 10, 10, 0.9),
                                           det(50, 50, 10, 10, 0.2)};
  CHECK(nms(disjoint, 0.5).size() == 2);
  const std::vector<Detection> classes = {det(0, 0, 10, 10, 0.9, 0),
                                          det(0, 0, 10, 10, 0.8, 1)};
  CHECK(nms(classes, 0.5).size() == 2);
}

TEST_CASE("nms matches the reference implementation") {
  Gen gen(21);
  for (int c = 0; c < 300; ++c) {
    const auto dets = gen.detections(gen.uniform_int(0, 6), 100, 100, 60, 60,
                                     gen.chance(0.3) ? 2 : 1);
    const double thr = gen.unif(0.05, 0.95);
    const auto kept = nms(dets, thr);
    const auto ref = oracle::nms_keep(dets, thr);
    REQUIRE(kept.size() == ref.size());
    std::size_t k = 0;
    for (int idx : ref) {
      CHECK(kept[k].box.x == dets[idx].box.x);
      CHECK(kept[k].confidence == dets[idx].confidence);
      ++k;
    }
  }
}

TEST_CASE("nms output is a pairwise-suppressed subset and idempotent") {
  Gen gen(22);
  for (int c = 0; c < 250; ++c) {
    const auto dets = gen.detections(gen.uniform_int(0, 12), 200, 200, 120, 120,
                                     2);
    const double thr = gen.unif(0.1, 0.9);
    const auto kept = nms(dets, thr);
    CHECK(kept.size() <= dets.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j)
        if (kept[i].class_id == kept[j].class_id)
          CHECK(iou(kept[i].box, kept[j].box) < thr);
    const auto twice = nms(kept, thr);
    REQUIRE(twice.size() == kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      CHECK(twice[i].box.x == kept[i].box.x);
      CHECK(twice[i].confidence == kept[i].confidence);
    }
  }
}

TEST_CASE("waste_count examples") {
  DetectorConfig cfg;
  FrameRecord rec;
  CHECK(waste_count(rec, cfg) == 0);

  rec.detections = {det(0, 0, 10, 10, 0.9), det(50, 50, 10, 10, 0.8),
                    det(200, 200, 10, 10, 0.7)};
  CHECK(waste_count(rec, cfg) == 3);

  rec.detections = {det(0, 0, 10, 10, 0.9), det(0, 0, 10, 10, 0.8),
                    det(200, 200, 10, 10, 0.7)};
  CHECK(waste_count(rec, cfg) == 2);

  // below the confidence threshold
  rec.detections = {det(0, 0, 10, 10, 0.1)};
  CHECK(waste_count(rec, cfg) == 0);
  // non-waste class
  rec.detections = {det(0, 0, 10, 10, 0.9, 1)};
  CHECK(waste_count(rec, cfg) == 0);
}

TEST_CASE("raising the confidence threshold never raises waste_count") {
  Gen gen(23);
  for (int c = 0; c < 250; ++c) {
    FrameRecord rec;
    rec.detections = gen.detections(gen.uniform_int(0, 15), 300, 300, 150, 150);
    DetectorConfig cfg;
    int prev = -1;
    for (double thr : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
      cfg.confidence_threshold = thr;
      const int n = waste_count(rec, cfg);
      if (prev >= 0) CHECK(n <= prev);
      prev = n;
    }
  }
}

#ifdef GVP_NULL_ADAPTER_PATH
TEST_CASE("run_adapter round trip with the null adapter") {
  DetectorConfig cfg;
  cfg.adapter_cmd = GVP_NULL_ADAPTER_PATH;
  const std::vector<std::string> paths = {"/x/20250602_000000.jpg",
                                          "/x/20250602_000500.jpg",
                                          "/x/20250602_001000.jpg"};
  const DetectionStream s = run_adapter(cfg, paths);
  REQUIRE(s.frames.size() == paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    CHECK(s.frames[i].detections.empty());
    CHECK(s.frames[i].frame_id ==
          std::filesystem::path(paths[i]).stem().string());
  }
}

TEST_CASE("run_adapter count always equals the input frame count") {
  DetectorConfig cfg;
  cfg.adapter_cmd = GVP_NULL_ADAPTER_PATH;
  Gen gen(31);
  for (int c = 0; c < 5; ++c) {
    const int n = gen.uniform_int(1, 400);
    std::vector<std::string> paths;
    for (int i = 0; i < n; ++i) {
      char name[40];
      std::snprintf(name, sizeof(name), "/y/20250602_%02d%02d%02d.jpg",
                    i / 3600, (i / 60) % 60, i % 60);
      paths.push_back(name);
    }
    CHECK(run_adapter(cfg, paths).frames.size() == static_cast<std::size_t>(n));
  }
}
#endif

TEST_CASE("run_adapter reports crashes and protocol violations") {
  DetectorConfig cfg;
  SUBCASE("unset command") {
    CHECK(thrown_code([&] { run_adapter(cfg, {}); }) == "InvalidConfig");
  }
  SUBCASE("nonzero exit") {
    cfg.adapter_cmd = "exit 1";
    const std::vector<std::string> paths = {"/x/20250602_000000.jpg"};
    CHECK(thrown_code([&] { run_adapter(cfg, paths); }) == "AdapterCrashed");
  }
  SUBCASE("crash while we are still writing many paths") {
    cfg.adapter_cmd = "exit 3";
    std::vector<std::string> paths(20000, "/x/20250602_000000.jpg");
    CHECK(thrown_code([&] { run_adapter(cfg, paths); }) == "AdapterCrashed");
  }
  SUBCASE("missing records") {
    cfg.adapter_cmd =
        R"(printf '{"frame_id":"20250602_000000","ts":1,"boxes":[]}\n'; cat >/dev/null)";
    const std::vector<std::string> paths = {"/x/20250602_000000.jpg",
                                            "/x/20250602_000500.jpg"};
    CHECK(thrown_code([&] { run_adapter(cfg, paths); }) ==
          "ProtocolViolation");
  }
  SUBCASE("record for the wrong frame") {
    cfg.adapter_cmd =
        R"(printf '{"frame_id":"nope","ts":1,"boxes":[]}\n'; cat >/dev/null)";
    const std::vector<std::string> paths = {"/x/20250602_000000.jpg"};
    CHECK(thrown_code([&] { run_adapter(cfg, paths); }) ==
          "ProtocolViolation");
  }
  SUBCASE("fixture adapter emits matching records") {
    TempDir dir;
    std::ofstream(dir.file("fix.jsonl"))
        << R"({"frame_id":"20250602_000000","ts":100,"boxes":[{"x":1,"y":2,"w":3,"h":4,"conf":0.5,"cls":0}]})"
        << "\n"
        << R"({"frame_id":"20250602_000500","ts":400,"boxes":[]})" << "\n";
    cfg.adapter_cmd = "cat " + dir.file("fix.jsonl") + "; cat >/dev/null";
    const std::vector<std::string> paths = {"/x/20250602_000000.jpg",
                                            "/x/20250602_000500.jpg"};
    const DetectionStream s = run_adapter(cfg, paths);
    REQUIRE(s.frames.size() == 2);
    CHECK(s.frames[0].detections.size() == 1);
    CHECK(s.frames[0].detections[0].box.h == 4.0);
  }
}
