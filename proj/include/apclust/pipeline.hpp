#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apclust/apc.hpp"
#include "apclust/geo.hpp"
#include "apclust/ua.hpp"

namespace apclust {

struct IngestResult {
    std::vector<GeoPoint> points;
    std::size_t total_rows = 0;  ///< data rows seen (blank lines excluded)
    std::size_t dropped = 0;     ///< rows with missing or out-of-range coordinates
};

/// Reads comma-delimited UTF-8 text with a header row holding `lat` and `lon`
/// columns (case-insensitive; `latitude`/`longitude` also accepted). Other
/// columns are ignored. Throws IoError, FormatError (missing columns) or
/// InputError (no valid rows).
IngestResult ingest_points(const std::filesystem::path& path);

/// Crash records; same schema as ingest_points().
inline IngestResult ingest_crashes(const std::filesystem::path& path) { return ingest_points(path); }

/// Uniform sample of k indices without replacement, ascending, deterministic
/// per seed. Requires 2 ≤ k ≤ n.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

/// Points at sample_indices(); k = n returns the input unchanged.
std::vector<GeoPoint> sample_points(std::span<const GeoPoint> points, std::size_t k, std::uint64_t seed);

struct RunManifest {
    std::filesystem::path input_crashes;
    std::optional<std::filesystem::path> input_intersections;
    std::vector<double> q_levels;
    std::vector<std::size_t> sample_sizes;
    std::uint64_t rng_seed = 0;

    bool derive_thresholds = false;  ///< derive meso_max from a grid over the intersections
    ScaleThresholds thresholds;      ///< used as-is unless derive_thresholds
    double grid_cell_km = 1.0;

    std::filesystem::path output_dir;  ///< empty: nothing is written

    ApcConfig apc;  ///< q and rng_seed are overridden per cell
    double buffer_m = kDefaultBufferM;
    std::size_t jobs = 1;         ///< sweep cells run concurrently
    double memory_warn_gb = 1.0;  ///< warn when the concurrent estimate exceeds this
    double memory_cap_gb = 4.0;   ///< refuse (ResourceError) above this

    void validate() const;
};

struct CellOutput {
    SweepCell cell;
    std::vector<UnitOfAnalysis> units;
    std::filesystem::path geojson;  ///< empty when not written
};

struct SweepReport {
    std::vector<CellOutput> cells;  ///< q-major, then sample size, in manifest order
    std::size_t dataset_size = 0;
    std::size_t dropped_rows = 0;
    std::size_t intersection_count = 0;
    std::uint64_t seed = 0;
    std::string timestamp;  ///< ISO-8601 UTC
    GeoPoint origin;
    ScaleThresholds thresholds;
    std::vector<std::string> warnings;
};

/// Runs every (q, sample size) cell. When output_dir is set, writes
/// summary.csv and report.json, then one GeoJSON per cell; GeoJSON failures
/// are recorded as warnings. A failing cell aborts the sweep with an error of
/// the same kind that names the cell.
SweepReport run_sweep(const RunManifest& manifest);

/// RFC 7946 FeatureCollection of the units' polygons in EPSG:4326.
void export_geojson(std::span<const UnitOfAnalysis> units, const GeoPoint& origin,
                    const std::filesystem::path& path);

/// One row per cell: q, sample_size, n_clusters, median_area_km2,
/// median_intersections, level.
void export_summary(const SweepReport& report, const std::filesystem::path& path);
std::string format_summary(const SweepReport& report);

/// Run metadata including the timestamp and per-cell convergence.
void export_report_json(const SweepReport& report, const std::filesystem::path& path);

/// "units_q<q>_n<size>.geojson"
std::string geojson_filename(double q, std::size_t sample_size);

/// Shortest round-trip text for a double ("0.5", "0.999", "1").
std::string format_number(double v);

}  // namespace apclust
