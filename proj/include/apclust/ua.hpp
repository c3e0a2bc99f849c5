#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "apclust/apc.hpp"
#include "apclust/geo.hpp"

namespace apclust {

enum class ScaleLevel { Micro, Meso, Macro };

std::string_view to_string(ScaleLevel level) noexcept;

/// Inclusive upper bounds on the median intersection count per level.
struct ScaleThresholds {
    double micro_max = 1.0;
    double meso_max = 30.0;

    void validate() const;
};

struct UnitOfAnalysis {
    std::size_t cluster_id = 0;
    std::size_t exemplar = 0;
    ClusterPolygon polygon;
    std::size_t n_points = 0;
    std::size_t n_intersections = 0;
    ScaleLevel level = ScaleLevel::Micro;
};

/// One row of the clustering summary table.
struct SweepCell {
    double q = 0.0;
    std::size_t sample_size = 0;
    std::size_t n_clusters = 0;
    double median_area_km2 = 0.0;
    double median_intersections = 0.0;
    ScaleLevel level = ScaleLevel::Micro;
    bool converged = false;
    std::size_t iterations = 0;
};

struct UnitsResult {
    std::vector<UnitOfAnalysis> units;
    SweepCell cell;
};

/// Per-polygon count of intersection points inside (boundary inclusive).
/// Overlapping polygons each count a shared point.
std::vector<std::size_t> count_intersections(std::span<const ClusterPolygon> polygons,
                                             std::span<const PlanarPoint> intersections);

/// ≤ micro_max → micro, ≤ meso_max → meso, otherwise macro.
ScaleLevel classify_level(double median_intersections, const ScaleThresholds& t = {});

/// Median intersections per non-empty cell of a cell_km × cell_km grid laid
/// over `bounds`, rounded half-up. Throws DerivationError when every cell is
/// empty and InputError for bad arguments or points outside the bounds.
int derive_meso_threshold(const PlanarBounds& bounds, std::span<const PlanarPoint> intersections,
                          double cell_km = 1.0);

/// One unit per exemplar (cluster_id follows exemplar order) plus the
/// run-level summary cell. `q` and `sample_size` are copied into the cell.
UnitsResult build_units(const ClusterResult& result, std::span<const PlanarPoint> points,
                        std::span<const PlanarPoint> intersections, const ScaleThresholds& t, double q,
                        double buffer_m = kDefaultBufferM);

}  // namespace apclust
