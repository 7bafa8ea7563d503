#pragma once

#include <span>

#include "gvp/types.hpp"

namespace gvp {

/// Intersection over union. 0 when the union is empty (degenerate boxes).
double iou(const BBox& a, const BBox& b);

/// Axis-wise intersection of two boxes; may be zero-area.
BBox intersect_box(const BBox& a, const BBox& b);

/// Box intersected with the frame rectangle [0,frame_w) x [0,frame_h).
BBox clip_box(const BBox& b, double frame_w, double frame_h);

/// Exact area of the union of axis-aligned rectangles via a
/// coordinate-compressed slab sweep. Overlaps counted once, degenerate boxes
/// contribute nothing.
double union_area(std::span<const BBox> boxes);

/// area(union(boxes) ∩ roi) / area(roi). Exact (clip + sweep) for
/// axis-aligned rectangular ROIs; scanline-rasterized at `grid_scale` cells
/// per pixel per axis otherwise. Throws ZeroRoiArea when area(roi) = 0.
double coverage_fraction(std::span<const BBox> boxes, const RoiPolygon& roi,
                         int grid_scale = 1);

/// Center-format fractions -> pixel corner format. Throws OutOfRange when a
/// normalized field leaves [0,1] by more than 1e-6.
BBox norm_to_pixel(const NormBox& n, double frame_w, double frame_h);

/// Pixel corner format -> center-format fractions. Throws OutOfRange when the
/// box leaves the frame by more than 1e-6 of either dimension.
NormBox pixel_to_norm(const BBox& b, double frame_w, double frame_h);

/// Horizontal mirror: cx -> 1 - cx, everything else unchanged.
NormBox flip_horizontal(const NormBox& n);

}  // namespace gvp
