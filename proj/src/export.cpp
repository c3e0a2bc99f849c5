#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "apclust/error.hpp"
#include "apclust/pipeline.hpp"

namespace apclust {

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << body;
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

std::string geojson_filename(double q, std::size_t sample_size) {
    return fmt::format("units_q{}_n{}.geojson", format_number(q), sample_size);
}

void export_geojson(std::span<const UnitOfAnalysis> units, const GeoPoint& origin, const std::filesystem::path& path) {
    if (units.empty()) throw InputError("no units to export");

    fmt::memory_buffer buf;
    auto out = std::back_inserter(buf);
    fmt::format_to(out, "{{\"type\":\"FeatureCollection\",\"features\":[");
    for (std::size_t u = 0; u < units.size(); ++u) {
        const auto& ua = units[u];
        if (u > 0) fmt::format_to(out, ",");
        fmt::format_to(out, "\n{{\"type\":\"Feature\",\"properties\":{{\"cluster_id\":{},\"n_points\":{},"
                            "\"area_km2\":{},\"n_intersections\":{},\"level\":\"{}\"}},"
                            "\"geometry\":{{\"type\":\"Polygon\",\"coordinates\":[[",
                       ua.cluster_id, ua.n_points, format_number(ua.polygon.area_km2), ua.n_intersections,
                       to_string(ua.level));
        const auto& ring = ua.polygon.ring;
        for (std::size_t v = 0; v < ring.size(); ++v) {
            const auto g = unproject(ring[v], origin);
            fmt::format_to(out, "{}[{:.7f},{:.7f}]", v > 0 ? "," : "", g.lon, g.lat);
        }
        fmt::format_to(out, "]]}}}}");
    }
    fmt::format_to(out, "\n]}}\n");
    write_file(path, fmt::to_string(buf));
}

std::string format_summary(const SweepReport& report) {
    std::string s = "q,sample_size,n_clusters,median_area_km2,median_intersections,level\n";
    for (const auto& c : report.cells) {
        const auto& cell = c.cell;
        s += fmt::format("{},{},{},{:.3f},{:.1f},{}\n", format_number(cell.q), cell.sample_size, cell.n_clusters,
                         cell.median_area_km2, cell.median_intersections, to_string(cell.level));
    }
    return s;
}

void export_summary(const SweepReport& report, const std::filesystem::path& path) {
    if (report.cells.empty()) throw InputError("report has no cells");
    write_file(path, format_summary(report));
}

void export_report_json(const SweepReport& report, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["timestamp"] = report.timestamp;
    j["seed"] = report.seed;
    j["dataset_size"] = report.dataset_size;
    j["dropped_rows"] = report.dropped_rows;
    j["intersection_count"] = report.intersection_count;
    j["projection_origin"] = {{"lon", report.origin.lon}, {"lat", report.origin.lat}};
    j["thresholds"] = {{"micro_max", report.thresholds.micro_max}, {"meso_max", report.thresholds.meso_max}};
    auto& cells = j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : report.cells) {
        cells.push_back({{"q", c.cell.q},
                         {"sample_size", c.cell.sample_size},
                         {"n_clusters", c.cell.n_clusters},
                         {"median_area_km2", c.cell.median_area_km2},
                         {"median_intersections", c.cell.median_intersections},
                         {"level", std::string(to_string(c.cell.level))},
                         {"converged", c.cell.converged},
                         {"iterations", c.cell.iterations},
                         {"geojson", c.geojson.empty() ? std::string() : c.geojson.filename().string()}});
    }
    j["warnings"] = report.warnings;
    write_file(path, j.dump(2) + "\n");
}

}  // namespace apclust
