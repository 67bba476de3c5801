#include "modalshift/geometry.hpp"

#include <algorithm>
#include <limits>

namespace modalshift {

BoundingBox bounding_box(std::span<const Point> points) {
  BoundingBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity()};
  for (const Point& p : points) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  return box;
}

double polygon_area(std::span<const Point> ring) {
  if (ring.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    twice += (ring[j].x * ring[i].y) - (ring[i].x * ring[j].y);
  }
  return std::abs(twice) * 0.5;
}

bool point_in_polygon(Point p, std::span<const Point> ring) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double point_segment_distance(Point p, Point a, Point b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  double px = p.x - a.x;
  double py = p.y - a.y;
  if (len2 > 0.0) {
    const double t = std::clamp((px * abx + py * aby) / len2, 0.0, 1.0);
    px -= t * abx;
    py -= t * aby;
  }
  return std::sqrt(px * px + py * py);
}

double point_geometry_distance(Point p, std::span<const Point> geometry) {
  if (geometry.empty()) return std::numeric_limits<double>::infinity();
  if (geometry.size() == 1) return distance(p, geometry[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < geometry.size(); ++k) {
    best = std::min(best, point_segment_distance(p, geometry[k], geometry[k + 1]));
  }
  return best;
}

double polyline_length(std::span<const Point> line) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < line.size(); ++k) total += distance(line[k], line[k + 1]);
  return total;
}

}  // namespace modalshift
