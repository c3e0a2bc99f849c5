#include "apclust/ua.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "apclust/error.hpp"
#include "apclust/stats.hpp"

namespace apclust {

std::string_view to_string(ScaleLevel level) noexcept {
    switch (level) {
        case ScaleLevel::Micro: return "micro";
        case ScaleLevel::Meso: return "meso";
        case ScaleLevel::Macro: return "macro";
    }
    return "unknown";
}

void ScaleThresholds::validate() const {
    if (!(micro_max >= 0.0 && micro_max < meso_max) || !std::isfinite(meso_max)) {
        throw InputError("thresholds must satisfy 0 <= micro_max < meso_max");
    }
}

std::vector<std::size_t> count_intersections(std::span<const ClusterPolygon> polygons,
                                             std::span<const PlanarPoint> intersections) {
    std::vector<std::size_t> counts(polygons.size(), 0);
    if (intersections.empty()) return counts;

    const auto np = static_cast<std::ptrdiff_t>(polygons.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t pi = 0; pi < np; ++pi) {
        const auto& poly = polygons[static_cast<std::size_t>(pi)];
        const auto box = bounds_of(poly.ring);
        std::size_t c = 0;
        for (const auto& pt : intersections) {
            // 1e-6 slack so boundary points within contains()'s tolerance survive the box test
            if (pt.x < box.min_x - 1e-6 || pt.x > box.max_x + 1e-6 || pt.y < box.min_y - 1e-6 ||
                pt.y > box.max_y + 1e-6) {
                continue;
            }
            if (contains(poly, pt)) ++c;
        }
        counts[static_cast<std::size_t>(pi)] = c;
    }
    return counts;
}

ScaleLevel classify_level(double median_intersections, const ScaleThresholds& t) {
    if (!(median_intersections >= 0.0)) throw InputError("median intersection count must be non-negative");
    if (median_intersections <= t.micro_max) return ScaleLevel::Micro;
    if (median_intersections <= t.meso_max) return ScaleLevel::Meso;
    return ScaleLevel::Macro;
}

int derive_meso_threshold(const PlanarBounds& bounds, std::span<const PlanarPoint> intersections, double cell_km) {
    if (!(cell_km > 0.0) || !std::isfinite(cell_km)) throw InputError("cell size must be positive");
    if (!(bounds.max_x >= bounds.min_x && bounds.max_y >= bounds.min_y)) throw InputError("malformed bounds");

    const double cell_m = cell_km * 1000.0;
    const auto cols = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((bounds.max_x - bounds.min_x) / cell_m)));
    const auto rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((bounds.max_y - bounds.min_y) / cell_m)));

    std::vector<std::size_t> grid(cols * rows, 0);
    for (std::size_t i = 0; i < intersections.size(); ++i) {
        const auto& p = intersections[i];
        if (p.x < bounds.min_x || p.x > bounds.max_x || p.y < bounds.min_y || p.y > bounds.max_y) {
            throw InputError("intersection " + std::to_string(i) + " lies outside the study area bounds");
        }
        const auto c = std::min(cols - 1, static_cast<std::size_t>((p.x - bounds.min_x) / cell_m));
        const auto r = std::min(rows - 1, static_cast<std::size_t>((p.y - bounds.min_y) / cell_m));
        ++grid[r * cols + c];
    }

    std::vector<double> occupied;
    for (auto c : grid) {
        if (c > 0) occupied.push_back(static_cast<double>(c));
    }
    if (occupied.empty()) {
        throw DerivationError("no grid cell contains an intersection; supply the meso threshold manually");
    }
    return static_cast<int>(std::floor(median(occupied) + 0.5));
}

UnitsResult build_units(const ClusterResult& result, std::span<const PlanarPoint> points,
                        std::span<const PlanarPoint> intersections, const ScaleThresholds& t, double q,
                        double buffer_m) {
    t.validate();
    if (result.assignment.size() != points.size()) {
        throw InputError("cluster assignment does not match the point set");
    }
    if (result.exemplars.empty()) throw InputError("cluster result has no exemplars");
    // polygonize() must not throw inside the parallel region below
    if (!(buffer_m > 0.0) || !std::isfinite(buffer_m)) throw InputError("buffer must be positive");

    std::vector<std::vector<PlanarPoint>> members(result.exemplars.size());
    {
        std::vector<std::size_t> slot(points.size(), SIZE_MAX);
        for (std::size_t c = 0; c < result.exemplars.size(); ++c) slot[result.exemplars[c]] = c;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const std::size_t c = slot[result.assignment[i]];
            if (c == SIZE_MAX) throw InputError("point assigned to a non-exemplar");
            members[c].push_back(points[i]);
        }
    }

    UnitsResult out;
    out.units.resize(result.exemplars.size());
    std::vector<ClusterPolygon> polygons(result.exemplars.size());
    const auto nc = static_cast<std::ptrdiff_t>(result.exemplars.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ci = 0; ci < nc; ++ci) {
        const auto c = static_cast<std::size_t>(ci);
        polygons[c] = polygonize(members[c], buffer_m);
    }

    const auto counts = count_intersections(polygons, intersections);
    std::vector<double> areas, inters;
    areas.reserve(polygons.size());
    inters.reserve(polygons.size());
    for (std::size_t c = 0; c < polygons.size(); ++c) {
        auto& ua = out.units[c];
        ua.cluster_id = c;
        ua.exemplar = result.exemplars[c];
        ua.n_points = members[c].size();
        ua.n_intersections = counts[c];
        ua.level = classify_level(static_cast<double>(counts[c]), t);
        ua.polygon = std::move(polygons[c]);
        areas.push_back(ua.polygon.area_km2);
        inters.push_back(static_cast<double>(counts[c]));
    }

    auto& cell = out.cell;
    cell.q = q;
    cell.sample_size = points.size();
    cell.n_clusters = out.units.size();
    cell.median_area_km2 = median(areas);
    cell.median_intersections = median(inters);
    cell.level = classify_level(cell.median_intersections, t);
    cell.converged = result.converged;
    cell.iterations = result.iterations_run;
    return out;
}

}  // namespace apclust
