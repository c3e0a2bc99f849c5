#include "apclust/testkit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "apclust/error.hpp"

namespace apclust::testkit {

namespace {

// true when the set bits of a, read ascending, sort before those of b
bool lex_less(std::uint32_t a, std::uint32_t b) {
    while (a != 0 && b != 0) {
        const int ia = std::countr_zero(a);
        const int ib = std::countr_zero(b);
        if (ia != ib) return ia < ib;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

}  // namespace

double exemplar_set_value(const SimilarityMatrix& m, std::span<const std::size_t> exemplars) {
    if (exemplars.empty()) throw InputError("exemplar set must be non-empty");
    const std::size_t n = m.size();
    std::vector<char> chosen(n, 0);
    for (auto e : exemplars) chosen[e] = 1;

    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) {
            value += m.preference(i);
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (auto e : exemplars) best = std::max(best, m(i, e));
        value += best;
    }
    return value;
}

BruteForceResult brute_force_exemplars(const SimilarityMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0) throw InputError("empty similarity matrix");
    if (n > kBruteForceMaxPoints) {
        throw InputError(fmt::format("brute force refuses n = {} (limit {})", n, kBruteForceMaxPoints));
    }
    if (!m.preference_applied()) throw InputError("preference must be applied");

    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::uint32_t best_mask = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> members;
    members.reserve(n);

    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        members.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint32_t{1} << i)) members.push_back(i);
        }
        const double v = exemplar_set_value(m, members);
        if (v > best_value || (v == best_value && lex_less(mask, best_mask))) {
            best_value = v;
            best_mask = mask;
        }
    }

    BruteForceResult r;
    r.net_similarity = best_value;
    for (std::size_t i = 0; i < n; ++i) {
        if (best_mask & (std::uint32_t{1} << i)) r.exemplars.push_back(i);
    }
    return r;
}

SyntheticCorpus generate_blobs(const SyntheticSpec& spec) {
    if (spec.n_blobs == 0 || spec.points_per_blob == 0) throw GenerationError("need at least one blob and one point");
    if (!(spec.min_separation_m > 0.0)) throw GenerationError("min_separation_m must be positive");
    if (!(spec.blob_sigma_m >= 0.0)) throw GenerationError("blob_sigma_m must be non-negative");

    std::mt19937_64 rng(spec.seed);
    const double half = spec.square_m / 2.0;
    std::uniform_real_distribution<double> coord(-half, half);
    std::normal_distribution<double> noise(0.0, 1.0);

    constexpr int kTries = 10000;
    std::vector<PlanarPoint> centers;
    for (std::size_t b = 0; b < spec.n_blobs; ++b) {
        bool placed = false;
        for (int t = 0; t < kTries && !placed; ++t) {
            const PlanarPoint c{coord(rng), coord(rng)};
            placed = std::all_of(centers.begin(), centers.end(), [&](const PlanarPoint& o) {
                return std::hypot(c.x - o.x, c.y - o.y) >= spec.min_separation_m;
            });
            if (placed) centers.push_back(c);
        }
        if (!placed) {
            throw GenerationError(fmt::format("could not place blob {} at {} m separation inside a {} m square", b,
                                              spec.min_separation_m, spec.square_m));
        }
    }

    SyntheticCorpus out;
    for (std::size_t b = 0; b < spec.n_blobs; ++b) {
        std::vector<PlanarPoint> offs(spec.points_per_blob);
        double mx = 0.0, my = 0.0;
        for (auto& o : offs) {
            o = {spec.blob_sigma_m * noise(rng), spec.blob_sigma_m * noise(rng)};
            mx += o.x;
            my += o.y;
        }
        mx /= static_cast<double>(offs.size());
        my /= static_cast<double>(offs.size());
        for (const auto& o : offs) {
            out.points.push_back(unproject(PlanarPoint{centers[b].x + (o.x - mx), centers[b].y + (o.y - my)}, spec.anchor));
            out.labels.push_back(b);
        }
        out.centers.push_back(unproject(centers[b], spec.anchor));
    }
    return out;
}

std::vector<PlanarPoint> uniform_points(std::size_t n, double extent_m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, extent_m);
    std::vector<PlanarPoint> pts(n);
    for (auto& p : pts) {
        p.x = coord(rng);
        p.y = coord(rng);
    }
    return pts;
}

void write_points_csv(const std::filesystem::path& path, std::span<const GeoPoint> points) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "id,lat,lon\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << fmt::format("{},{:.9f},{:.9f}\n", i, points[i].lat, points[i].lon);
    }
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace apclust::testkit
