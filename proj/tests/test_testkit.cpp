#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "apclust/error.hpp"
#include "apclust/testkit.hpp"

using namespace apclust;
using namespace apclust::testkit;

namespace {

double planar_distance(const PlanarPoint& a, const PlanarPoint& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

TEST_CASE("brute force: single point") {
    auto m = build_similarity(std::vector<PlanarPoint>{{3, 4}});
    apply_preference(m, 0.5);
    const auto r = brute_force_exemplars(m);
    CHECK(r.exemplars == std::vector<std::size_t>{0});
    CHECK(r.net_similarity == 0.0);
}

TEST_CASE("brute force: two points, hand-enumerated subsets") {
    // d² = 100; p = -50 makes {0,1} worth -100 and {0} or {1} worth -150.
    auto m = build_similarity(std::vector<PlanarPoint>{{0, 0}, {10, 0}});
    apply_preference_value(m, -50.0);
    CHECK(exemplar_set_value(m, std::vector<std::size_t>{0}) == -150.0);
    CHECK(exemplar_set_value(m, std::vector<std::size_t>{1}) == -150.0);
    CHECK(exemplar_set_value(m, std::vector<std::size_t>{0, 1}) == -100.0);
    const auto r = brute_force_exemplars(m);
    CHECK(r.exemplars == std::vector<std::size_t>{0, 1});
    CHECK(r.net_similarity == -100.0);

    // p = -150: singletons tie at -250 against -300 for both; the lowest index wins.
    auto m2 = build_similarity(std::vector<PlanarPoint>{{0, 0}, {10, 0}});
    apply_preference_value(m2, -150.0);
    const auto r2 = brute_force_exemplars(m2);
    CHECK(r2.exemplars == std::vector<std::size_t>{0});
    CHECK(r2.net_similarity == -250.0);
}

TEST_CASE("brute force: two triples pick their medoids") {
    const std::vector<PlanarPoint> pts{{0, 0}, {1, 0}, {2, 0}, {100, 0}, {101, 0}, {102, 0}};
    auto m = build_similarity(pts);
    apply_preference_value(m, -10.0);
    const auto r = brute_force_exemplars(m);
    CHECK(r.exemplars == std::vector<std::size_t>{1, 4});
    CHECK(r.net_similarity == doctest::Approx(-24.0));
}

TEST_CASE("brute force: refuses oversized inputs") {
    auto m = build_similarity(uniform_points(kBruteForceMaxPoints + 1, 100.0, 1));
    apply_preference(m, 0.5);
    CHECK_THROWS_AS(brute_force_exemplars(m), InputError);
}

TEST_CASE("property: brute force beats random subsets") {
    std::mt19937_64 rng(77);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 4 + seed % 8;
        auto m = build_similarity(uniform_points(n, 1000.0, seed));
        apply_preference(m, 0.5);
        const auto best = brute_force_exemplars(m);
        CHECK(best.net_similarity == doctest::Approx(exemplar_set_value(m, best.exemplars)));
        std::bernoulli_distribution coin(0.4);
        for (int t = 0; t < 50; ++t) {
            std::vector<std::size_t> subset;
            for (std::size_t k = 0; k < n; ++k) {
                if (coin(rng)) subset.push_back(k);
            }
            if (subset.empty()) continue;
            CHECK(exemplar_set_value(m, subset) <= best.net_similarity + 1e-9);
        }
    }
}

TEST_CASE("generate_blobs") {
    SUBCASE("one blob of one point is its centre") {
        SyntheticSpec s;
        const auto c = generate_blobs(s);
        REQUIRE(c.points.size() == 1);
        CHECK(c.points[0].lon == doctest::Approx(c.centers[0].lon).epsilon(1e-12));
        CHECK(c.points[0].lat == doctest::Approx(c.centers[0].lat).epsilon(1e-12));
    }
    SUBCASE("separated centres and tight members") {
        SyntheticSpec s;
        s.n_blobs = 4;
        s.points_per_blob = 25;
        s.blob_sigma_m = 10.0;
        s.min_separation_m = 10000.0;
        s.square_m = 40000.0;
        s.seed = 5;
        const auto c = generate_blobs(s);
        REQUIRE(c.points.size() == 100);
        const auto pts = project(c.points, s.anchor);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                if (c.labels[i] != c.labels[j]) CHECK(planar_distance(pts[i], pts[j]) > 9000.0);
            }
        }
        for (std::size_t b = 0; b < s.n_blobs; ++b) {
            const auto cp = project(c.centers[b], s.anchor);
            double mx = 0.0, my = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (c.labels[i] != b) continue;
                mx += pts[i].x / 25.0;
                my += pts[i].y / 25.0;
            }
            CHECK(std::abs(mx - cp.x) < 1e-3);
            CHECK(std::abs(my - cp.y) < 1e-3);
        }
    }
    SUBCASE("deterministic in the seed") {
        SyntheticSpec s;
        s.n_blobs = 3;
        s.points_per_blob = 10;
        s.seed = 9;
        CHECK(generate_blobs(s).points == generate_blobs(s).points);
        auto t = s;
        t.seed = 10;
        CHECK(generate_blobs(s).points != generate_blobs(t).points);
    }
    SUBCASE("impossible separation") {
        SyntheticSpec s;
        s.n_blobs = 50;
        s.min_separation_m = 15000.0;
        CHECK_THROWS_AS(generate_blobs(s), GenerationError);
    }
}

TEST_CASE("uniform_points stays in range") {
    const auto pts = uniform_points(500, 250.0, 3);
    CHECK(pts.size() == 500);
    for (const auto& p : pts) {
        CHECK(p.x >= 0.0);
        CHECK(p.x < 250.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y < 250.0);
    }
    CHECK(uniform_points(10, 1.0, 4) == uniform_points(10, 1.0, 4));
}
