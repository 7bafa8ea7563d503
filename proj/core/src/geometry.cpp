#include "gvp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "gvp/errors.hpp"

namespace gvp {

double iou(const BBox& a, const BBox& b) {
  const BBox inter = intersect_box(a, b);
  const double ai = inter.area();
  const double au = a.area() + b.area() - ai;
  return au > 0 ? ai / au : 0.0;
}

BBox intersect_box(const BBox& a, const BBox& b) {
  const double x0 = std::max(a.x, b.x);
  const double y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.x2(), b.x2());
  const double y1 = std::min(a.y2(), b.y2());
  return BBox{x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

BBox clip_box(const BBox& b, double frame_w, double frame_h) {
  return intersect_box(b, BBox{0, 0, frame_w, frame_h});
}

double union_area(std::span<const BBox> boxes) {
  std::vector<double> xs;
  xs.reserve(boxes.size() * 2);
  for (const BBox& b : boxes) {
    if (b.w > 0 && b.h > 0) {
      xs.push_back(b.x);
      xs.push_back(b.x2());
    }
  }
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double total = 0.0;
  std::vector<std::pair<double, double>> ys;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    ys.clear();
    for (const BBox& b : boxes) {
      if (b.w > 0 && b.h > 0 && b.x <= x0 && b.x2() >= x1)
        ys.emplace_back(b.y, b.y2());
    }
    if (ys.empty()) continue;
    std::sort(ys.begin(), ys.end());
    double covered = 0.0;
    double cur_lo = ys[0].first, cur_hi = ys[0].second;
    for (std::size_t k = 1; k < ys.size(); ++k) {
      if (ys[k].first > cur_hi) {
        covered += cur_hi - cur_lo;
        cur_lo = ys[k].first;
        cur_hi = ys[k].second;
      } else {
        cur_hi = std::max(cur_hi, ys[k].second);
      }
    }
    covered += cur_hi - cur_lo;
    total += covered * (x1 - x0);
  }
  return total;
}

namespace {

// Merged half-open spans [lo, hi) on one scanline.
using Spans = std::vector<std::pair<double, double>>;

void merge_spans(Spans& spans) {
  if (spans.empty()) return;
  std::sort(spans.begin(), spans.end());
  Spans out;
  out.push_back(spans[0]);
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first > out.back().second)
      out.push_back(spans[i]);
    else
      out.back().second = std::max(out.back().second, spans[i].second);
  }
  spans.swap(out);
}

Spans intersect_spans(const Spans& a, const Spans& b) {
  Spans out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].first, b[j].first);
    const double hi = std::min(a[i].second, b[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second)
      ++i;
    else
      ++j;
  }
  return out;
}

// Cells k whose center k + 0.5 lies in [lo, hi), in scaled units.
long long cells_in_span(double lo, double hi) {
  const long long k_lo = static_cast<long long>(std::ceil(lo - 0.5));
  const long long k_hi = static_cast<long long>(std::ceil(hi - 0.5));
  return std::max(0LL, k_hi - k_lo);
}

long long cells_in_spans(const Spans& spans) {
  long long n = 0;
  for (const auto& [lo, hi] : spans) n += cells_in_span(lo, hi);
  return n;
}

// Even-odd polygon x-crossings at scanline height y.
Spans polygon_row_spans(const RoiPolygon& roi, double scale, double y) {
  std::vector<double> xs;
  const auto& v = roi.vertices;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ay = v[i].y * scale, by = v[(i + 1) % n].y * scale;
    if (ay == by) continue;
    const double lo = std::min(ay, by), hi = std::max(ay, by);
    if (y < lo || y >= hi) continue;  // half-open so vertices count once
    const double ax = v[i].x * scale, bx = v[(i + 1) % n].x * scale;
    xs.push_back(ax + (y - ay) / (by - ay) * (bx - ax));
  }
  std::sort(xs.begin(), xs.end());
  Spans spans;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2)
    if (xs[i] < xs[i + 1]) spans.emplace_back(xs[i], xs[i + 1]);
  merge_spans(spans);
  return spans;
}

double rasterized_coverage(std::span<const BBox> boxes, const RoiPolygon& roi,
                           int grid_scale) {
  const double scale = static_cast<double>(grid_scale);
  double y_min = roi.vertices[0].y, y_max = roi.vertices[0].y;
  for (const Point& p : roi.vertices) {
    y_min = std::min(y_min, p.y);
    y_max = std::max(y_max, p.y);
  }
  const long long row_lo =
      static_cast<long long>(std::floor(y_min * scale));
  const long long row_hi =
      static_cast<long long>(std::ceil(y_max * scale));

  long long roi_cells = 0, covered_cells = 0;
  Spans box_spans;
  for (long long row = row_lo; row < row_hi; ++row) {
    const double yc = static_cast<double>(row) + 0.5;
    Spans poly = polygon_row_spans(roi, scale, yc);
    if (poly.empty()) continue;
    roi_cells += cells_in_spans(poly);
    box_spans.clear();
    for (const BBox& b : boxes) {
      if (b.w <= 0 || b.h <= 0) continue;
      if (b.y * scale <= yc && yc < b.y2() * scale)
        box_spans.emplace_back(b.x * scale, b.x2() * scale);
    }
    if (box_spans.empty()) continue;
    merge_spans(box_spans);
    covered_cells += cells_in_spans(intersect_spans(poly, box_spans));
  }
  if (roi_cells == 0) return 0.0;
  return static_cast<double>(covered_cells) / static_cast<double>(roi_cells);
}

}  // namespace

double coverage_fraction(std::span<const BBox> boxes, const RoiPolygon& roi,
                         int grid_scale) {
  if (grid_scale < 1)
    raise(Errc::invalid_config, "grid_scale must be >= 1");
  if (polygon_area(roi) <= 0)
    raise(Errc::zero_roi_area, "roi polygon has zero area");

  BBox rect;
  if (is_axis_aligned_rect(roi, &rect)) {
    std::vector<BBox> clipped;
    clipped.reserve(boxes.size());
    for (const BBox& b : boxes) {
      const BBox c = intersect_box(b, rect);
      if (c.w > 0 && c.h > 0) clipped.push_back(c);
    }
    return union_area(clipped) / rect.area();
  }
  return rasterized_coverage(boxes, roi, grid_scale);
}

namespace {

double checked_unit(double v, const char* field) {
  const double tol = 1e-6;
  if (v < -tol || v > 1.0 + tol) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "normalized field %s = %.9g outside [0,1]",
                  field, v);
    raise(Errc::out_of_range, buf);
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

BBox norm_to_pixel(const NormBox& n, double frame_w, double frame_h) {
  const double cx = checked_unit(n.cx, "cx");
  const double cy = checked_unit(n.cy, "cy");
  const double w = checked_unit(n.w, "w");
  const double h = checked_unit(n.h, "h");
  return BBox{cx * frame_w - w * frame_w / 2.0,
              cy * frame_h - h * frame_h / 2.0, w * frame_w, h * frame_h};
}

NormBox pixel_to_norm(const BBox& b, double frame_w, double frame_h) {
  NormBox n;
  n.cx = (b.x + b.w / 2.0) / frame_w;
  n.cy = (b.y + b.h / 2.0) / frame_h;
  n.w = b.w / frame_w;
  n.h = b.h / frame_h;
  n.cx = checked_unit(n.cx, "cx");
  n.cy = checked_unit(n.cy, "cy");
  n.w = checked_unit(n.w, "w");
  n.h = checked_unit(n.h, "h");
  return n;
}

NormBox flip_horizontal(const NormBox& n) {
  return NormBox{1.0 - n.cx, n.cy, n.w, n.h};
}

}  // namespace gvp
