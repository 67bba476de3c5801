#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace modalshift {

/// Planar point in kilometres on the local city frame.
struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct BoundingBox {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

  bool contains(Point p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  /// Lower bound on the distance from p to any point in the box.
  double distance_to(Point p) const {
    const double dx = std::max({min_x - p.x, 0.0, p.x - max_x});
    const double dy = std::max({min_y - p.y, 0.0, p.y - max_y});
    return std::hypot(dx, dy);
  }
};

BoundingBox bounding_box(std::span<const Point> points);

/// Unsigned shoelace area.
double polygon_area(std::span<const Point> ring);

/// Even-odd rule; the ring is implicitly closed.
bool point_in_polygon(Point p, std::span<const Point> ring);

double point_segment_distance(Point p, Point a, Point b);

/// Minimum distance from p to a point or polyline.
double point_geometry_distance(Point p, std::span<const Point> geometry);

double polyline_length(std::span<const Point> line);

}  // namespace modalshift
