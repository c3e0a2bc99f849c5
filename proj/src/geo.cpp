#include "apclust/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "apclust/error.hpp"

namespace apclust {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kBoundaryTolM = 1e-7;

void check_projectable(const GeoPoint& p, const char* what, std::size_t index) {
    if (!is_valid(p)) {
        throw InputError(std::string("invalid ") + what + " coordinate at index " + std::to_string(index));
    }
    if (std::abs(p.lat) > kMaxProjectableLat) {
        throw UnsupportedRegionError(std::string(what) + " at index " + std::to_string(index) +
                                     " lies beyond ±89.9° latitude");
    }
}

double cross(const PlanarPoint& o, const PlanarPoint& a, const PlanarPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped, open ring.
std::vector<PlanarPoint> convex_hull(std::vector<PlanarPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const PlanarPoint& a, const PlanarPoint& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    std::vector<PlanarPoint> hull(2 * pts.size());
    std::size_t h = 0;
    for (const auto& p : pts) {
        while (h >= 2 && cross(hull[h - 2], hull[h - 1], p) <= 0.0) --h;
        hull[h++] = p;
    }
    const std::size_t lower = h + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (h >= lower && cross(hull[h - 2], hull[h - 1], *it) <= 0.0) --h;
        hull[h++] = *it;
    }
    hull.resize(h - 1);
    return hull;
}

double signed_area_m2(std::span<const PlanarPoint> ring) {
    if (ring.size() < 3) return 0.0;
    // shoelace relative to the first vertex to limit cancellation
    const PlanarPoint o = ring.front();
    double twice = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const double x0 = ring[i].x - o.x, y0 = ring[i].y - o.y;
        const double x1 = ring[i + 1].x - o.x, y1 = ring[i + 1].y - o.y;
        twice += x0 * y1 - x1 * y0;
    }
    // an open ring's closing edge ends at the origin vertex and contributes 0
    return 0.5 * twice;
}

double segment_distance(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    const double cx = a.x + t * dx - p.x, cy = a.y + t * dy - p.y;
    return std::sqrt(cx * cx + cy * cy);
}

}  // namespace

bool is_valid(const GeoPoint& p) noexcept {
    return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lon >= -180.0 && p.lon <= 180.0 &&
           p.lat >= -90.0 && p.lat <= 90.0;
}

PlanarPoint project(const GeoPoint& point, const GeoPoint& origin) {
    double dlon = point.lon - origin.lon;
    if (dlon > 180.0) dlon -= 360.0;
    if (dlon < -180.0) dlon += 360.0;
    return {kEarthRadiusM * dlon * kDegToRad * std::cos(origin.lat * kDegToRad),
            kEarthRadiusM * (point.lat - origin.lat) * kDegToRad};
}

std::vector<PlanarPoint> project(std::span<const GeoPoint> points, const GeoPoint& origin) {
    check_projectable(origin, "projection origin", 0);
    std::vector<PlanarPoint> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        check_projectable(points[i], "point", i);
        out.push_back(project(points[i], origin));
    }
    return out;
}

GeoPoint unproject(const PlanarPoint& point, const GeoPoint& origin) {
    const double lat = origin.lat + point.y / kEarthRadiusM * kRadToDeg;
    double lon = origin.lon + point.x / (kEarthRadiusM * std::cos(origin.lat * kDegToRad)) * kRadToDeg;
    if (lon > 180.0) lon -= 360.0;
    if (lon < -180.0) lon += 360.0;
    return {lon, lat};
}

std::vector<GeoPoint> unproject(std::span<const PlanarPoint> points, const GeoPoint& origin) {
    std::vector<GeoPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(unproject(p, origin));
    return out;
}

GeoPoint centroid(std::span<const GeoPoint> points) {
    if (points.empty()) throw InputError("centroid of an empty point set");
    double lon = 0.0, lat = 0.0;
    for (const auto& p : points) {
        lon += p.lon;
        lat += p.lat;
    }
    const auto n = static_cast<double>(points.size());
    return {lon / n, lat / n};
}

PlanarBounds bounds_of(std::span<const PlanarPoint> points) {
    if (points.empty()) return {};
    PlanarBounds b{points[0].x, points[0].y, points[0].x, points[0].y};
    for (const auto& p : points) {
        b.min_x = std::min(b.min_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_x = std::max(b.max_x, p.x);
        b.max_y = std::max(b.max_y, p.y);
    }
    return b;
}

ClusterPolygon polygonize(std::span<const PlanarPoint> members, double buffer_m) {
    if (members.empty()) throw InputError("cannot polygonize an empty cluster");
    if (!(buffer_m > 0.0) || !std::isfinite(buffer_m)) throw InputError("buffer must be positive");

    auto hull = convex_hull({members.begin(), members.end()});
    const double floor_m2 = 4.0 * buffer_m * buffer_m;
    if (hull.size() < 3 || signed_area_m2(hull) < floor_m2) {
        std::vector<PlanarPoint> corners;
        corners.reserve(4 * members.size());
        for (const auto& p : members) {
            corners.push_back({p.x - buffer_m, p.y - buffer_m});
            corners.push_back({p.x + buffer_m, p.y - buffer_m});
            corners.push_back({p.x + buffer_m, p.y + buffer_m});
            corners.push_back({p.x - buffer_m, p.y + buffer_m});
        }
        hull = convex_hull(std::move(corners));
    }
    hull.push_back(hull.front());

    ClusterPolygon poly;
    poly.area_km2 = ring_area_km2(hull);
    poly.ring = std::move(hull);
    poly.member_count = members.size();
    return poly;
}

double ring_area_km2(std::span<const PlanarPoint> ring) { return std::abs(signed_area_m2(ring)) * 1e-6; }

double polygon_area_km2(const ClusterPolygon& p) { return ring_area_km2(p.ring); }

bool contains(const ClusterPolygon& p, const PlanarPoint& pt) {
    const auto& ring = p.ring;
    if (ring.size() < 2) return false;
    bool inside = false;
    const std::size_t m = ring.size();
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
        const auto& a = ring[i];
        const auto& c = ring[j];
        if (segment_distance(pt, a, c) <= kBoundaryTolM) return true;
        if ((a.y > pt.y) != (c.y > pt.y)) {
            const double x_cross = (c.x - a.x) * (pt.y - a.y) / (c.y - a.y) + a.x;
            if (pt.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

}  // namespace apclust
