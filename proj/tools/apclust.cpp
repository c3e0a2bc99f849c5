// apclust: affinity-propagation clustering of geolocated crash records into
// units of analysis.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "apclust/error.hpp"
#include "apclust/pipeline.hpp"
#include "apclust/testkit.hpp"

namespace {

using namespace apclust;

struct CommonOptions {
    std::string input;
    std::string intersections;
    std::string out;
    std::uint64_t seed = 0;
    std::string thresholds = "1,30";
    double grid_cell_km = 1.0;
    std::size_t jobs = 1;
    bool strict = false;
    bool no_refine = false;
};

void add_tuning(CLI::App* cmd, RunManifest& m, CommonOptions& o) {
    cmd->add_option("--damping", m.apc.damping, "Message damping factor in [0.5, 1)")->capture_default_str();
    cmd->add_option("--max-iter", m.apc.max_iterations, "Iteration limit")->capture_default_str();
    cmd->add_option("--window", m.apc.convergence_window, "Stable iterations required to stop")->capture_default_str();
    cmd->add_option("--jitter", m.apc.jitter_scale, "Seeded noise added to similarities")->capture_default_str();
    cmd->add_option("--buffer-m", m.buffer_m, "Half-width of squares around degenerate clusters")->capture_default_str();
    cmd->add_option("--mem-warn-gb", m.memory_warn_gb, "Warn above this matrix memory estimate")->capture_default_str();
    cmd->add_option("--mem-cap-gb", m.memory_cap_gb, "Refuse above this matrix memory estimate")->capture_default_str();
    cmd->add_flag("--strict", o.strict, "Fail (exit 4) when a run does not converge");
    cmd->add_flag("--no-refine", o.no_refine, "Keep the exemplars chosen by the messages, skip the medoid pass");
}

void apply_thresholds(const std::string& spec, RunManifest& m) {
    if (spec == "derive") {
        m.derive_thresholds = true;
        return;
    }
    const auto comma = spec.find(',');
    if (comma == std::string::npos) throw InputError("--thresholds expects 'derive' or '<micro_max>,<meso_max>'");
    try {
        m.thresholds.micro_max = std::stod(spec.substr(0, comma));
        m.thresholds.meso_max = std::stod(spec.substr(comma + 1));
    } catch (const std::exception&) {
        throw InputError("unparsable --thresholds value '" + spec + "'");
    }
}

std::size_t env_threads() {
    const char* v = std::getenv("APCLUST_THREADS");
    if (v == nullptr || *v == '\0') return 0;
    try {
        const long n = std::stol(v);
        return n > 0 ? static_cast<std::size_t>(n) : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

int run_pipeline(RunManifest& m, const CommonOptions& o) {
    m.input_crashes = o.input;
    if (!o.intersections.empty()) m.input_intersections = o.intersections;
    m.output_dir = o.out;
    m.rng_seed = o.seed;
    m.grid_cell_km = o.grid_cell_km;
    m.apc.fallback_on_nonconvergence = !o.strict;
    m.apc.refine_exemplars = !o.no_refine;
    apply_thresholds(o.thresholds, m);

    m.jobs = o.jobs;
    if (const auto cap = env_threads(); cap > 0) m.jobs = std::min(m.jobs, cap);

    const auto report = run_sweep(m);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cerr << fmt::format("{} crash records ({} dropped), {} intersections, meso_max = {}\n",
                             report.dataset_size, report.dropped_rows, report.intersection_count,
                             format_number(report.thresholds.meso_max));
    std::cout << format_summary(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const auto cap = env_threads(); cap > 0) omp_set_num_threads(static_cast<int>(cap));

    CLI::App app{"Affinity propagation clustering of crash points into units of analysis"};
    app.require_subcommand(1);

    RunManifest cluster_m;
    CommonOptions cluster_o;
    double cluster_q = 0.5;
    std::size_t cluster_n = 0;
    auto* cluster = app.add_subcommand("cluster", "Cluster one sample at one preference quantile");
    cluster->add_option("--input", cluster_o.input, "Crash CSV with lat/lon columns")->required()->check(CLI::ExistingFile);
    cluster->add_option("--q", cluster_q, "Preference quantile in [0, 1]")->required();
    cluster->add_option("--sample", cluster_n, "Sample size")->required();
    cluster->add_option("--seed", cluster_o.seed, "Sampling and jitter seed")->required();
    cluster->add_option("--intersections", cluster_o.intersections, "Intersection CSV with lat/lon columns")
        ->check(CLI::ExistingFile);
    cluster->add_option("--out", cluster_o.out, "Output directory (summary.csv, report.json, GeoJSON)");
    cluster->add_option("--thresholds", cluster_o.thresholds, "derive | <micro_max>,<meso_max>")->capture_default_str();
    add_tuning(cluster, cluster_m, cluster_o);

    RunManifest sweep_m;
    CommonOptions sweep_o;
    auto* sweep = app.add_subcommand("sweep", "Cluster every (q, sample size) combination");
    sweep->add_option("--input", sweep_o.input, "Crash CSV with lat/lon columns")->required()->check(CLI::ExistingFile);
    sweep->add_option("--q", sweep_m.q_levels, "Comma-separated preference quantiles")->required()->delimiter(',');
    sweep->add_option("--samples", sweep_m.sample_sizes, "Comma-separated sample sizes")->required()->delimiter(',');
    sweep->add_option("--seed", sweep_o.seed, "Sampling and jitter seed")->required();
    sweep->add_option("--intersections", sweep_o.intersections, "Intersection CSV with lat/lon columns")
        ->check(CLI::ExistingFile);
    sweep->add_option("--thresholds", sweep_o.thresholds, "derive | <micro_max>,<meso_max>")->capture_default_str();
    sweep->add_option("--grid-cell-km", sweep_o.grid_cell_km, "Grid cell side for threshold derivation")->capture_default_str();
    sweep->add_option("--out", sweep_o.out, "Output directory")->required();
    sweep->add_option("--jobs", sweep_o.jobs, "Cells clustered concurrently")->capture_default_str();
    add_tuning(sweep, sweep_m, sweep_o);

    std::string derive_input;
    double cell_km = 1.0;
    auto* derive = app.add_subcommand("derive-threshold", "Median intersections per occupied grid cell");
    derive->add_option("--intersections", derive_input, "Intersection CSV with lat/lon columns")
        ->required()
        ->check(CLI::ExistingFile);
    derive->add_option("--cell-km", cell_km, "Grid cell side in km")->capture_default_str();

    testkit::SyntheticSpec gen_spec;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Write a synthetic blob corpus as crash CSV");
    generate->add_option("--blobs", gen_spec.n_blobs)->capture_default_str();
    generate->add_option("--per-blob", gen_spec.points_per_blob)->capture_default_str();
    generate->add_option("--sigma-m", gen_spec.blob_sigma_m)->capture_default_str();
    generate->add_option("--separation-m", gen_spec.min_separation_m)->capture_default_str();
    generate->add_option("--seed", gen_spec.seed)->capture_default_str();
    generate->add_option("--out", gen_out, "CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*cluster) {
            cluster_m.q_levels = {cluster_q};
            cluster_m.sample_sizes = {cluster_n};
            return run_pipeline(cluster_m, cluster_o);
        }
        if (*sweep) return run_pipeline(sweep_m, sweep_o);
        if (*derive) {
            const auto ing = ingest_points(derive_input);
            const auto origin = centroid(ing.points);
            const auto pts = project(ing.points, origin);
            const int t = derive_meso_threshold(bounds_of(pts), pts, cell_km);
            if (ing.dropped > 0) std::cerr << "warning: dropped " << ing.dropped << " rows\n";
            std::cout << t << '\n';
            return 0;
        }
        if (*generate) {
            const auto corpus = testkit::generate_blobs(gen_spec);
            testkit::write_points_csv(gen_out, corpus.points);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
