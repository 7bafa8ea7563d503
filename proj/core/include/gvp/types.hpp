#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gvp {

/// Axis-aligned box in pixel coordinates, top-left origin, y grows downward.
/// Treated as half-open [x, x+w) x [y, y+h) in area computations so shared
/// edges are never counted twice.
struct BBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double x2() const { return x + w; }
  double y2() const { return y + h; }
  double area() const { return w * h; }
};

/// Center-format box with all fields as fractions of the frame, each in [0,1].
struct NormBox {
  double cx = 0;
  double cy = 0;
  double w = 0;
  double h = 0;
};

inline constexpr int kWasteClass = 0;
inline constexpr int kNonWasteClass = 1;

struct Detection {
  BBox box;
  double confidence = 0;  // in [0,1]
  int class_id = kWasteClass;
};

struct GroundTruthBox {
  BBox box;
  int class_id = kWasteClass;
};

struct Point {
  double x = 0;
  double y = 0;
};

/// Region of interest: a simple polygon inside the frame. Denominator of all
/// coverage figures.
struct RoiPolygon {
  std::vector<Point> vertices;  // >= 3 points, not self-intersecting
  double frame_w = 0;
  double frame_h = 0;
};

RoiPolygon rect_roi(double x, double y, double w, double h, double frame_w,
                    double frame_h);
RoiPolygon full_frame_roi(double frame_w, double frame_h);

/// Shoelace area (absolute value).
double polygon_area(const RoiPolygon& roi);

/// True when the polygon is an axis-aligned rectangle; fills `rect` if given.
bool is_axis_aligned_rect(const RoiPolygon& roi, BBox* rect = nullptr);

/// True when no two non-adjacent edges intersect and no edge degenerates.
bool is_simple_polygon(const RoiPolygon& roi);

/// Throws InvalidConfig unless the ROI is a simple polygon with positive area
/// whose vertices lie within the frame.
void validate_roi(const RoiPolygon& roi);

/// One timestamped camera frame with its (possibly empty) detections.
struct FrameRecord {
  std::string frame_id;
  std::int64_t ts = 0;  // UTC seconds
  std::vector<Detection> detections;
};

}  // namespace gvp
