#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "apclust/error.hpp"
#include "apclust/pipeline.hpp"

namespace apclust {

namespace {

[[noreturn]] void rethrow_with_context(std::exception_ptr ep, const std::string& ctx) {
    try {
        std::rethrow_exception(ep);
    } catch (const UnsupportedRegionError& e) {
        throw UnsupportedRegionError(ctx + e.what());
    } catch (const InputError& e) {
        throw InputError(ctx + e.what());
    } catch (const FormatError& e) {
        throw FormatError(ctx + e.what());
    } catch (const ResourceError& e) {
        throw ResourceError(ctx + e.what());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(ctx + e.what());
    } catch (const DerivationError& e) {
        throw DerivationError(ctx + e.what());
    } catch (const IoError& e) {
        throw IoError(ctx + e.what());
    } catch (const std::bad_alloc&) {
        throw ResourceError(ctx + "out of memory");
    } catch (const std::exception& e) {
        throw Error(ctx + e.what());
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;

}  // namespace

void RunManifest::validate() const {
    if (q_levels.empty()) throw InputError("at least one q level is required");
    for (double q : q_levels) {
        if (!(q >= 0.0 && q <= 1.0)) throw InputError("q level " + format_number(q) + " outside [0, 1]");
    }
    if (sample_sizes.empty()) throw InputError("at least one sample size is required");
    for (auto k : sample_sizes) {
        if (k < 2) throw InputError("sample size must be at least 2");
    }
    if (derive_thresholds) {
        if (!input_intersections) throw InputError("deriving thresholds requires an intersections file");
        if (!(grid_cell_km > 0.0)) throw InputError("grid cell size must be positive");
    } else {
        thresholds.validate();
    }
    if (jobs == 0) throw InputError("jobs must be at least 1");
    if (!(memory_warn_gb > 0.0) || !(memory_cap_gb > 0.0)) throw InputError("memory limits must be positive");
    auto probe = apc;
    probe.q = q_levels.front();
    probe.validate();
}

SweepReport run_sweep(const RunManifest& manifest) {
    manifest.validate();

    SweepReport report;
    report.seed = manifest.rng_seed;

    const auto crashes = ingest_crashes(manifest.input_crashes);
    report.dataset_size = crashes.points.size();
    report.dropped_rows = crashes.dropped;
    if (crashes.dropped > 0) {
        report.warnings.push_back(fmt::format("{}: dropped {} of {} rows with missing or out-of-range coordinates",
                                              manifest.input_crashes.string(), crashes.dropped,
                                              crashes.total_rows));
    }
    for (auto k : manifest.sample_sizes) {
        if (k > report.dataset_size) {
            throw InputError(fmt::format("sample size {} exceeds the {} valid crash records", k,
                                         report.dataset_size));
        }
    }

    report.origin = centroid(crashes.points);
    const auto planar = project(crashes.points, report.origin);

    std::vector<PlanarPoint> intersections;
    if (manifest.input_intersections) {
        const auto ing = ingest_points(*manifest.input_intersections);
        if (ing.dropped > 0) {
            report.warnings.push_back(fmt::format("{}: dropped {} of {} rows",
                                                  manifest.input_intersections->string(), ing.dropped,
                                                  ing.total_rows));
        }
        intersections = project(ing.points, report.origin);
    } else {
        report.warnings.push_back("no intersections file given; every unit counts 0 intersections");
    }
    report.intersection_count = intersections.size();

    report.thresholds = manifest.thresholds;
    if (manifest.derive_thresholds) {
        const int meso = derive_meso_threshold(bounds_of(intersections), intersections, manifest.grid_cell_km);
        report.thresholds.meso_max = meso;
        if (!(report.thresholds.micro_max < report.thresholds.meso_max)) {
            throw DerivationError(fmt::format("derived meso threshold {} does not exceed micro_max {}", meso,
                                              format_number(report.thresholds.micro_max)));
        }
    }

    struct Job {
        double q;
        std::size_t k;
    };
    std::vector<Job> jobs;
    for (double q : manifest.q_levels) {
        for (auto k : manifest.sample_sizes) jobs.push_back({q, k});
    }

    const std::size_t largest = *std::max_element(manifest.sample_sizes.begin(), manifest.sample_sizes.end());
    const std::size_t concurrent = std::min(manifest.jobs, jobs.size());
    const double estimate_gb = static_cast<double>(concurrent) * static_cast<double>(estimated_run_bytes(largest)) / kGiB;
    if (estimate_gb > manifest.memory_cap_gb) {
        throw ResourceError(fmt::format("estimated {:.2f} GiB for {} concurrent run(s) of {} points exceeds the {:.2f} GiB cap",
                                        estimate_gb, concurrent, largest, manifest.memory_cap_gb));
    }
    if (estimate_gb > manifest.memory_warn_gb) {
        report.warnings.push_back(fmt::format("clustering will hold about {:.2f} GiB of dense matrices", estimate_gb));
    }

    std::map<std::size_t, std::vector<std::size_t>> samples;
    for (auto k : manifest.sample_sizes) samples.try_emplace(k, sample_indices(planar.size(), k, manifest.rng_seed));

    std::vector<CellOutput> outputs(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) {
            try {
                const auto& idx = samples.at(jobs[j].k);
                std::vector<PlanarPoint> pts;
                pts.reserve(idx.size());
                for (auto i : idx) pts.push_back(planar[i]);

                ApcConfig cfg = manifest.apc;
                cfg.q = jobs[j].q;
                cfg.rng_seed = manifest.rng_seed;
                const auto result = run_apc(pts, cfg);
                auto units = build_units(result, pts, intersections, report.thresholds, jobs[j].q, manifest.buffer_m);
                outputs[j].cell = units.cell;
                outputs[j].units = std::move(units.units);
            } catch (...) {
                failures[j] = std::current_exception();
            }
        }
    };

    if (concurrent <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < concurrent; ++t) pool.emplace_back(worker);
    }

    for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (failures[j]) {
            rethrow_with_context(failures[j], fmt::format("cell q={} sample={}: ", format_number(jobs[j].q), jobs[j].k));
        }
        if (!outputs[j].cell.converged) {
            report.warnings.push_back(fmt::format("cell q={} sample={} stopped at the iteration limit without converging",
                                                  format_number(jobs[j].q), jobs[j].k));
        }
    }
    report.cells = std::move(outputs);
    report.timestamp = utc_timestamp();

    if (!manifest.output_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(manifest.output_dir, ec);
        if (ec) throw IoError("cannot create output directory " + manifest.output_dir.string() + ": " + ec.message());

        for (auto& c : report.cells) {
            const auto path = manifest.output_dir / geojson_filename(c.cell.q, c.cell.sample_size);
            try {
                export_geojson(c.units, report.origin, path);
                c.geojson = path;
            } catch (const std::exception& e) {
                report.warnings.push_back(std::string("GeoJSON export failed: ") + e.what());
            }
        }
        export_summary(report, manifest.output_dir / "summary.csv");
        export_report_json(report, manifest.output_dir / "report.json");
    }
    return report;
}

}  // namespace apclust
