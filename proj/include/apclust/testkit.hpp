#pragma once

// Verification machinery kept independent of the message-passing code: an
// exhaustive exemplar-set optimizer and seeded synthetic data generators.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "apclust/apc.hpp"
#include "apclust/geo.hpp"

namespace apclust::testkit {

inline constexpr std::size_t kBruteForceMaxPoints = 15;

struct BruteForceResult {
    std::vector<std::size_t> exemplars;  ///< ascending
    double net_similarity = 0.0;
};

/// Net similarity of an exemplar set with every other point sent to its most
/// similar exemplar.
double exemplar_set_value(const SimilarityMatrix& m, std::span<const std::size_t> exemplars);

/// Exhaustive search over every non-empty exemplar subset. Ties go to the
/// lexicographically smallest set. Refuses n > 15.
BruteForceResult brute_force_exemplars(const SimilarityMatrix& m);

struct SyntheticSpec {
    std::size_t n_blobs = 1;
    std::size_t points_per_blob = 1;
    double blob_sigma_m = 10.0;
    double min_separation_m = 1000.0;
    std::uint64_t seed = 0;
    double square_m = 20000.0;                 ///< side of the square holding blob centers
    GeoPoint anchor{-51.2, -30.05};            ///< square centre
};

struct SyntheticCorpus {
    std::vector<GeoPoint> points;   ///< blob-major order
    std::vector<std::size_t> labels;
    std::vector<GeoPoint> centers;
};

/// Blob centres at least min_separation_m apart; members drawn isotropic
/// normal with blob_sigma_m and shifted so each blob's mean is its centre.
/// Throws GenerationError when the centres cannot be placed.
SyntheticCorpus generate_blobs(const SyntheticSpec& spec);

/// n points uniform in [0, extent_m)².
std::vector<PlanarPoint> uniform_points(std::size_t n, double extent_m, std::uint64_t seed);

/// Writes `id,lat,lon` rows in the format ingest_points() reads.
void write_points_csv(const std::filesystem::path& path, std::span<const GeoPoint> points);

}  // namespace apclust::testkit
