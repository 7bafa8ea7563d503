#include "gvp/types.hpp"

#include <cmath>
#include <cstdio>

#include "gvp/errors.hpp"

namespace gvp {

RoiPolygon rect_roi(double x, double y, double w, double h, double frame_w,
                    double frame_h) {
  RoiPolygon roi;
  roi.vertices = {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}};
  roi.frame_w = frame_w;
  roi.frame_h = frame_h;
  return roi;
}

RoiPolygon full_frame_roi(double frame_w, double frame_h) {
  return rect_roi(0, 0, frame_w, frame_h, frame_w, frame_h);
}

double polygon_area(const RoiPolygon& roi) {
  const auto& v = roi.vertices;
  if (v.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

bool is_axis_aligned_rect(const RoiPolygon& roi, BBox* rect) {
  const auto& v = roi.vertices;
  if (v.size() != 4) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % 4];
    const bool horizontal = a.y == b.y && a.x != b.x;
    const bool vertical = a.x == b.x && a.y != b.y;
    if (!horizontal && !vertical) return false;
    // consecutive edges must alternate orientation
    const Point& c = v[(i + 2) % 4];
    const bool next_horizontal = b.y == c.y && b.x != c.x;
    if (horizontal == next_horizontal) return false;
  }
  if (rect) {
    double x0 = v[0].x, x1 = v[0].x, y0 = v[0].y, y1 = v[0].y;
    for (const Point& p : v) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    *rect = BBox{x0, y0, x1 - x0, y1 - y0};
  }
  return true;
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& a, const Point& b, const Point& c,
                        const Point& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

}  // namespace

bool is_simple_polygon(const RoiPolygon& roi) {
  const auto& v = roi.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a.x == b.x && a.y == b.y) return false;  // degenerate edge
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        return false;
    }
  }
  // a spike (collinear turn-back) at a vertex also self-overlaps
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    const Point& c = v[(i + 2) % n];
    if (cross(a, b, c) == 0) {
      const double dot = (a.x - b.x) * (c.x - b.x) + (a.y - b.y) * (c.y - b.y);
      if (dot > 0) return false;
    }
  }
  return true;
}

void validate_roi(const RoiPolygon& roi) {
  if (roi.frame_w <= 0 || roi.frame_h <= 0)
    raise(Errc::invalid_config, "roi frame dimensions must be positive");
  if (roi.vertices.size() < 3)
    raise(Errc::invalid_config, "roi polygon needs at least 3 vertices");
  for (const Point& p : roi.vertices) {
    if (p.x < 0 || p.x > roi.frame_w || p.y < 0 || p.y > roi.frame_h) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "roi vertex (%g, %g) outside frame", p.x,
                    p.y);
      raise(Errc::invalid_config, buf);
    }
  }
  if (!is_simple_polygon(roi))
    raise(Errc::invalid_config, "roi polygon is self-intersecting");
  if (polygon_area(roi) <= 0)
    raise(Errc::invalid_config, "roi polygon has zero area");
}

}  // namespace gvp
