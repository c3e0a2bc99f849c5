#pragma once

#include <span>
#include <vector>

namespace apclust {

/// WGS84 (EPSG:4326) position in decimal degrees.
struct GeoPoint {
    double lon = 0.0;
    double lat = 0.0;

    bool operator==(const GeoPoint&) const = default;
};

/// Meters east/north of a projection origin.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const PlanarPoint&) const = default;
};

/// Mean Earth radius used by the local projection, meters.
inline constexpr double kEarthRadiusM = 6371008.8;

/// Latitude magnitude beyond which the equirectangular frame is refused.
inline constexpr double kMaxProjectableLat = 89.9;

/// Default half-width of the square drawn around degenerate clusters.
inline constexpr double kDefaultBufferM = 15.0;

bool is_valid(const GeoPoint& p) noexcept;

struct PlanarBounds {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
};

/// Closed counter-clockwise ring (front() == back()) around a cluster.
struct ClusterPolygon {
    std::vector<PlanarPoint> ring;
    double area_km2 = 0.0;
    std::size_t member_count = 0;
};

/// Local equirectangular projection about `origin`:
///   x = R·Δlon·cos(lat_origin), y = R·Δlat   (angles in radians).
/// Throws InputError for invalid points and UnsupportedRegionError for
/// |lat| > 89.9°.
std::vector<PlanarPoint> project(std::span<const GeoPoint> points, const GeoPoint& origin);
PlanarPoint project(const GeoPoint& point, const GeoPoint& origin);

/// Inverse of project().
GeoPoint unproject(const PlanarPoint& point, const GeoPoint& origin);
std::vector<GeoPoint> unproject(std::span<const PlanarPoint> points, const GeoPoint& origin);

/// Arithmetic mean of lon/lat. Throws InputError on an empty set.
GeoPoint centroid(std::span<const GeoPoint> points);

PlanarBounds bounds_of(std::span<const PlanarPoint> points);

/// Convex hull of the members. Clusters whose hull covers less than one
/// buffer square, (2·buffer_m)², use the hull of squares of half-width
/// `buffer_m` centred on each member instead. That covers one or two points
/// and collinear sets, and keeps every polygon at least one square in area.
ClusterPolygon polygonize(std::span<const PlanarPoint> members, double buffer_m = kDefaultBufferM);

/// Shoelace area of a ring in km², independent of orientation.
double ring_area_km2(std::span<const PlanarPoint> ring);
double polygon_area_km2(const ClusterPolygon& p);

/// Boundary-inclusive point-in-polygon (ray casting, with points within
/// 1e-7 m of an edge treated as inside).
bool contains(const ClusterPolygon& p, const PlanarPoint& pt);

}  // namespace apclust
