#pragma once

#include <span>
#include <vector>

#include "modalshift/city.hpp"

namespace modalshift {

/// Analysis raster edge length, km.
inline constexpr double kCellKm = 0.05;
inline constexpr double kCellArea = kCellKm * kCellKm;

/// Centres of the analysis cells falling inside a zone polygon, stored as
/// separate coordinate arrays. Cells sit on a global grid anchored at the
/// frame origin. A zone too small to contain a cell centre is represented
/// by its centroid.
struct ZoneRaster {
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t size() const { return xs.size(); }
};

ZoneRaster rasterize_zone(const Zone& zone);

/// Area of the buffer of radius r around a point or polyline; for a
/// polyline this is the Steiner upper bound 2rL + πr².
double buffer_area(std::span<const Point> geometry, double radius);

/// Squared distance from each raster cell to the nearest part of `geometry`.
std::vector<double> raster_distance2(const ZoneRaster& raster, std::span<const Point> geometry);

/// Squared distance from each raster cell to the nearest of a set of points.
std::vector<double> raster_distance2_to_points(const ZoneRaster& raster, std::span<const Point> points);

/// Fraction of entries with inner² <= d2 < outer².
double fraction_in_range(std::span<const double> d2, double inner, double outer);

/// Area of zone ∩ buffer(service), km², from the 50 m raster. Clamped to
/// min(buffer area, zone area).
double service_coverage(const Zone& zone, const TransportService& service);
double service_coverage(const Zone& zone, const ZoneRaster& raster,
                        const TransportService& service);

/// Fraction of a zone's raster cells whose distance to `geometry` lies in
/// [inner, outer).
double ring_fraction(const ZoneRaster& raster, std::span<const Point> geometry, double inner,
                     double outer);

}  // namespace modalshift
