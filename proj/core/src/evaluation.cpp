#include "gvp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gvp/errors.hpp"
#include "gvp/geometry.hpp"

using ordered_json = nlohmann::ordered_json;

namespace gvp::eval {

MatchResult match_greedy(std::span<const Detection> dets,
                         std::span<const GroundTruthBox> gts,
                         double iou_threshold) {
  MatchResult res;
  res.iou_threshold = iou_threshold;

  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dets[a].confidence > dets[b].confidence;
  });

  std::vector<bool> gt_taken(gts.size(), false);
  std::vector<bool> det_matched(dets.size(), false);
  for (int di : order) {
    double best_iou = 0.0;
    int best_gt = -1;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (gt_taken[gi]) continue;
      const double v = iou(dets[di].box, gts[gi].box);
      if (v > best_iou) {  // ties keep the lower gt index
        best_iou = v;
        best_gt = static_cast<int>(gi);
      }
    }
    if (best_gt >= 0 && best_iou >= iou_threshold) {
      gt_taken[best_gt] = true;
      det_matched[di] = true;
      res.matches.emplace_back(di, best_gt);
    }
  }
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (!det_matched[i]) res.unmatched_detections.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < gts.size(); ++i)
    if (!gt_taken[i]) res.unmatched_ground_truth.push_back(static_cast<int>(i));
  return res;
}

Prf precision_recall_f1(long tp, long fp, long fn) {
  Prf out;
  if (tp + fp > 0)
    out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  else
    out.precision = fn == 0 ? 1.0 : 0.0;
  if (tp + fn > 0)
    out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  else
    out.recall = fp == 0 ? 1.0 : 0.0;
  const double pr = out.precision + out.recall;
  out.f1 = pr > 0 ? 2.0 * out.precision * out.recall / pr : 0.0;
  return out;
}

double average_precision(std::vector<ScoredDetection> scored, long total_gt,
                         std::vector<PrPoint>* curve) {
  if (curve) curve->clear();
  if (total_gt <= 0) {
    const double ap = scored.empty() ? 1.0 : 0.0;
    if (curve)
      for (int r = 0; r <= 100; ++r)
        curve->push_back(PrPoint{r / 100.0, ap});
    return ap;
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredDetection& a, const ScoredDetection& b) {
                     return a.confidence > b.confidence;
                   });
  std::vector<PrPoint> points;
  points.reserve(scored.size());
  long tp = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].is_tp) ++tp;
    points.push_back(
        PrPoint{static_cast<double>(tp) / static_cast<double>(total_gt),
                static_cast<double>(tp) / static_cast<double>(i + 1)});
  }
  // max precision at recall >= r, walking the staircase from the right
  double running_max = 0.0;
  std::vector<double> interp(101, 0.0);
  int level = 100;
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    while (level >= 0 && static_cast<double>(level) / 100.0 > it->recall) {
      interp[level] = running_max;
      --level;
    }
    running_max = std::max(running_max, it->precision);
  }
  for (; level >= 0; --level) interp[level] = running_max;

  double sum = 0.0;
  for (int r = 0; r <= 100; ++r) {
    sum += interp[r];
    if (curve) curve->push_back(PrPoint{r / 100.0, interp[r]});
  }
  return sum / 101.0;
}

namespace {

struct ClassAccum {
  long gt = 0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  std::vector<ScoredDetection> scored;
};

}  // namespace

EvalReport map50(const detect::DetectionStream& stream,
                 const dataset::AnnotationSet& ann,
                 const detect::DetectorConfig& cfg, double frame_w,
                 double frame_h) {
  std::vector<std::string> missing;
  for (const FrameRecord& rec : stream.frames)
    if (!ann.labels.count(rec.frame_id)) missing.push_back(rec.frame_id);
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " frames unannotated:";
    for (std::size_t i = 0; i < missing.size() && i < 8; ++i)
      msg += " " + missing[i];
    if (missing.size() > 8) msg += " ...";
    raise(Errc::missing_annotations, msg);
  }

  EvalReport report;
  report.iou_threshold = 0.5;

  std::map<int, ClassAccum> per_class;
  for (int c = 0; c < static_cast<int>(ann.class_names.size()); ++c)
    per_class[c];

  FrameConfusion frames;
  std::vector<Detection> dets_c;
  std::vector<GroundTruthBox> gts_c;
  for (const FrameRecord& rec : stream.frames) {
    const auto& labels = ann.labels.at(rec.frame_id);
    std::set<int> classes;
    for (const Detection& d : rec.detections) classes.insert(d.class_id);
    bool gt_waste = false;
    for (const dataset::LabeledBox& lb : labels) {
      classes.insert(lb.class_id);
      if (lb.class_id == kWasteClass) gt_waste = true;
    }
    for (int c : classes) {
      dets_c.clear();
      gts_c.clear();
      for (const Detection& d : rec.detections)
        if (d.class_id == c) dets_c.push_back(d);
      for (const dataset::LabeledBox& lb : labels)
        if (lb.class_id == c)
          gts_c.push_back(
              GroundTruthBox{norm_to_pixel(lb.box, frame_w, frame_h), c});

      const MatchResult m = match_greedy(dets_c, gts_c, 0.5);
      ClassAccum& acc = per_class[c];
      acc.gt += static_cast<long>(gts_c.size());
      acc.tp += static_cast<long>(m.matches.size());
      acc.fp += static_cast<long>(m.unmatched_detections.size());
      acc.fn += static_cast<long>(m.unmatched_ground_truth.size());
      std::vector<bool> matched(dets_c.size(), false);
      for (const auto& [di, gi] : m.matches) matched[di] = true;
      for (std::size_t i = 0; i < dets_c.size(); ++i)
        acc.scored.push_back(
            ScoredDetection{dets_c[i].confidence, matched[i]});
    }
    const bool pred_waste = detect::waste_count(rec, cfg) > 0;
    if (gt_waste && pred_waste) ++frames.tp;
    else if (gt_waste && !pred_waste) ++frames.fn;
    else if (!gt_waste && pred_waste) ++frames.fp;
    else ++frames.tn;
  }

  std::vector<ScoredDetection> pooled;
  long pooled_gt = 0;
  double ap_sum = 0.0;
  long classes_with_gt = 0;
  for (auto& [cid, acc] : per_class) {
    ClassReport cr;
    cr.class_id = cid;
    if (cid >= 0 && cid < static_cast<int>(ann.class_names.size()))
      cr.name = ann.class_names[cid];
    cr.gt = acc.gt;
    cr.tp = acc.tp;
    cr.fp = acc.fp;
    cr.fn = acc.fn;
    const Prf prf = precision_recall_f1(acc.tp, acc.fp, acc.fn);
    cr.precision = prf.precision;
    cr.recall = prf.recall;
    cr.f1 = prf.f1;
    cr.ap = average_precision(acc.scored, acc.gt, &cr.pr_curve);
    if (acc.gt > 0) {
      ap_sum += cr.ap;
      ++classes_with_gt;
    }
    report.tp += acc.tp;
    report.fp += acc.fp;
    report.fn += acc.fn;
    pooled_gt += acc.gt;
    pooled.insert(pooled.end(), acc.scored.begin(), acc.scored.end());
    report.per_class.push_back(std::move(cr));
  }
  const Prf agg = precision_recall_f1(report.tp, report.fp, report.fn);
  report.precision = agg.precision;
  report.recall = agg.recall;
  report.f1 = agg.f1;
  report.pooled_ap = average_precision(std::move(pooled), pooled_gt,
                                       &report.pr_curve);
  if (classes_with_gt > 0)
    report.map50 = ap_sum / static_cast<double>(classes_with_gt);
  else
    report.map50 = report.tp + report.fp == 0 ? 1.0 : 0.0;
  report.frames = frames;
  report.accuracy = frames.accuracy();
  return report;
}

double frame_accuracy(const detect::DetectionStream& stream,
                      const dataset::AnnotationSet& ann,
                      const detect::DetectorConfig& cfg, double frame_w,
                      double frame_h) {
  return map50(stream, ann, cfg, frame_w, frame_h).accuracy;
}

namespace {

ordered_json curve_json(const std::vector<PrPoint>& curve) {
  ordered_json arr = ordered_json::array();
  for (const PrPoint& p : curve)
    arr.push_back(ordered_json::array({p.recall, p.precision}));
  return arr;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  ordered_json j;
  j["iou_threshold"] = report.iou_threshold;
  ordered_json classes = ordered_json::array();
  for (const ClassReport& c : report.per_class) {
    classes.push_back(ordered_json{{"class_id", c.class_id},
                                   {"name", c.name},
                                   {"gt", c.gt},
                                   {"tp", c.tp},
                                   {"fp", c.fp},
                                   {"fn", c.fn},
                                   {"precision", c.precision},
                                   {"recall", c.recall},
                                   {"f1", c.f1},
                                   {"ap", c.ap},
                                   {"pr_curve", curve_json(c.pr_curve)}});
  }
  j["classes"] = std::move(classes);
  j["aggregate"] = ordered_json{{"tp", report.tp},
                                {"fp", report.fp},
                                {"fn", report.fn},
                                {"precision", report.precision},
                                {"recall", report.recall},
                                {"f1", report.f1},
                                {"ap", report.pooled_ap},
                                {"pr_curve", curve_json(report.pr_curve)}};
  j["map50"] = report.map50;
  j["frame_accuracy"] = ordered_json{{"tp", report.frames.tp},
                                     {"tn", report.frames.tn},
                                     {"fp", report.frames.fp},
                                     {"fn", report.frames.fn},
                                     {"accuracy", report.accuracy}};
  return j.dump(2);
}

ModelRow report_row(const std::string& model, const EvalReport& report) {
  return ModelRow{model,       report.precision, report.recall,
                  report.f1,   report.map50,     report.accuracy};
}

std::string render_table(std::span<const ModelRow> rows) {
  std::size_t name_w = 5;  // "Model"
  for (const ModelRow& r : rows) name_w = std::max(name_w, r.model.size());
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-*s  %9s  %6s  %8s  %6s  %8s\n",
                static_cast<int>(name_w), "Model", "Precision", "Recall",
                "F1-Score", "mAP@50", "Accuracy");
  out << buf;
  for (const ModelRow& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-*s  %9.2f  %6.2f  %8.2f  %6.2f  %7.2f%%\n",
                  static_cast<int>(name_w), r.model.c_str(), r.precision,
                  r.recall, r.f1, r.map50, r.accuracy * 100.0);
    out << buf;
  }
  return out.str();
}

}  // namespace gvp::eval
