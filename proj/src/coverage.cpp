#include "modalshift/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "modalshift/kernels.hpp"

namespace modalshift {

ZoneRaster rasterize_zone(const Zone& zone) {
  ZoneRaster raster;
  const BoundingBox box = bounding_box(zone.polygon);
  const auto first_col = static_cast<std::int64_t>(std::floor(box.min_x / kCellKm));
  const auto last_col = static_cast<std::int64_t>(std::ceil(box.max_x / kCellKm));
  const auto first_row = static_cast<std::int64_t>(std::floor(box.min_y / kCellKm));
  const auto last_row = static_cast<std::int64_t>(std::ceil(box.max_y / kCellKm));
  for (std::int64_t row = first_row; row <= last_row; ++row) {
    const double y = (static_cast<double>(row) + 0.5) * kCellKm;
    for (std::int64_t col = first_col; col <= last_col; ++col) {
      const double x = (static_cast<double>(col) + 0.5) * kCellKm;
      if (point_in_polygon({x, y}, zone.polygon)) {
        raster.xs.push_back(x);
        raster.ys.push_back(y);
      }
    }
  }
  if (raster.xs.empty()) {
    raster.xs.push_back(zone.centroid.x);
    raster.ys.push_back(zone.centroid.y);
  }
  return raster;
}

double buffer_area(std::span<const Point> geometry, double radius) {
  return 2.0 * radius * polyline_length(geometry) + std::numbers::pi * radius * radius;
}

std::vector<double> raster_distance2(const ZoneRaster& raster, std::span<const Point> geometry) {
  const auto& backend = kernels::active_backend();
  std::vector<double> d2(raster.size(), std::numeric_limits<double>::infinity());
  if (geometry.size() == 1) {
    backend.min_dist2_to_segment(raster.xs.data(), raster.ys.data(), raster.size(), geometry[0],
                                 geometry[0], d2.data());
  }
  for (std::size_t k = 0; k + 1 < geometry.size(); ++k) {
    backend.min_dist2_to_segment(raster.xs.data(), raster.ys.data(), raster.size(), geometry[k],
                                 geometry[k + 1], d2.data());
  }
  return d2;
}

std::vector<double> raster_distance2_to_points(const ZoneRaster& raster,
                                               std::span<const Point> points) {
  const auto& backend = kernels::active_backend();
  std::vector<double> d2(raster.size(), std::numeric_limits<double>::infinity());
  for (const Point& p : points) {
    backend.min_dist2_to_segment(raster.xs.data(), raster.ys.data(), raster.size(), p, p, d2.data());
  }
  return d2;
}

double fraction_in_range(std::span<const double> d2, double inner, double outer) {
  if (d2.empty()) return 0.0;
  const std::size_t n =
      kernels::active_backend().count_in_range(d2.data(), d2.size(), inner * inner, outer * outer);
  return static_cast<double>(n) / static_cast<double>(d2.size());
}

namespace {

bool out_of_reach(const Zone& zone, std::span<const Point> geometry, double radius) {
  BoundingBox zb = bounding_box(zone.polygon);
  if (zone.polygon.empty()) zb = {zone.centroid.x, zone.centroid.y, zone.centroid.x, zone.centroid.y};
  const BoundingBox gb = bounding_box(geometry);
  const double gap_x = std::max({gb.min_x - zb.max_x, zb.min_x - gb.max_x, 0.0});
  const double gap_y = std::max({gb.min_y - zb.max_y, zb.min_y - gb.max_y, 0.0});
  return std::hypot(gap_x, gap_y) > radius;
}

}  // namespace

double service_coverage(const Zone& zone, const ZoneRaster& raster,
                        const TransportService& service) {
  const double r = service.service_range_km;
  if (service.geometry.empty() || out_of_reach(zone, service.geometry, r)) return 0.0;
  const std::vector<double> d2 = raster_distance2(raster, service.geometry);
  const std::size_t inside = kernels::active_backend().count_in_range(
      d2.data(), d2.size(), 0.0, std::nextafter(r * r, std::numeric_limits<double>::infinity()));
  const double raster_area = static_cast<double>(inside) * kCellArea;
  return std::min({raster_area, buffer_area(service.geometry, r), zone.area});
}

double service_coverage(const Zone& zone, const TransportService& service) {
  return service_coverage(zone, rasterize_zone(zone), service);
}

double ring_fraction(const ZoneRaster& raster, std::span<const Point> geometry, double inner,
                     double outer) {
  if (geometry.empty() || raster.size() == 0) return 0.0;
  return fraction_in_range(raster_distance2(raster, geometry), inner, outer);
}

}  // namespace modalshift
