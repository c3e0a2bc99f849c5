#include <doctest.h>

#include <random>
#include <vector>

#include "apclust/error.hpp"
#include "apclust/testkit.hpp"
#include "apclust/ua.hpp"

using namespace apclust;

namespace {

std::vector<PlanarPoint> grid_points(int per_side, double spacing, double offset) {
    std::vector<PlanarPoint> pts;
    for (int i = 0; i < per_side; ++i) {
        for (int j = 0; j < per_side; ++j) pts.push_back({offset + spacing * i, offset + spacing * j});
    }
    return pts;
}

std::vector<PlanarPoint> square(double x0, double y0, double side) {
    return {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
}

}  // namespace

TEST_CASE("count_intersections") {
    const std::vector<ClusterPolygon> polys{polygonize(square(0, 0, 1000)), polygonize(square(5000, 0, 1000))};
    SUBCASE("no intersections") {
        CHECK(count_intersections(polys, {}) == std::vector<std::size_t>{0, 0});
    }
    SUBCASE("one at a centroid") {
        const std::vector<PlanarPoint> one{{500, 500}};
        CHECK(count_intersections(polys, one) == std::vector<std::size_t>{1, 0});
    }
    SUBCASE("25 of a 100-point grid fall inside a 1 km square") {
        const auto grid = grid_points(10, 200.0, 100.0);
        std::size_t enumerated = 0;
        for (const auto& p : grid) enumerated += (p.x <= 1000 && p.y <= 1000);
        CHECK(enumerated == 25);
        CHECK(count_intersections(polys, grid)[0] == 25);
    }
    SUBCASE("overlapping polygons each count a shared point") {
        const std::vector<ClusterPolygon> overlap{polygonize(square(0, 0, 1000)), polygonize(square(500, 500, 1000))};
        const std::vector<PlanarPoint> shared{{750, 750}};
        CHECK(count_intersections(overlap, shared) == std::vector<std::size_t>{1, 1});
    }
    SUBCASE("edge points count") {
        const std::vector<PlanarPoint> edge{{1000, 400}, {0, 0}};
        CHECK(count_intersections(polys, edge)[0] == 2);
    }
}

TEST_CASE("classify_level: inclusive upper bounds") {
    CHECK(classify_level(0) == ScaleLevel::Micro);
    CHECK(classify_level(1) == ScaleLevel::Micro);
    CHECK(classify_level(1.5) == ScaleLevel::Meso);
    CHECK(classify_level(18) == ScaleLevel::Meso);
    CHECK(classify_level(30) == ScaleLevel::Meso);
    CHECK(classify_level(30.5) == ScaleLevel::Macro);
    CHECK(classify_level(189) == ScaleLevel::Macro);
    CHECK(classify_level(26, ScaleThresholds{1, 25}) == ScaleLevel::Macro);
    CHECK_THROWS_AS(classify_level(-1), InputError);
    CHECK(to_string(ScaleLevel::Meso) == "meso");
}

TEST_CASE("property: classification is total and monotone in meso_max") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> med(0.0, 200.0), lim(2.0, 100.0), bump(0.0, 50.0);
    for (int t = 0; t < 2000; ++t) {
        const double m = (t % 4 == 0) ? std::floor(med(rng)) : med(rng);
        ScaleThresholds lo{1.0, lim(rng)};
        ScaleThresholds hi{1.0, lo.meso_max + bump(rng)};
        const auto a = classify_level(m, lo);
        const auto b = classify_level(m, hi);
        if (a == ScaleLevel::Meso) CHECK(b == ScaleLevel::Meso);
        if (a == ScaleLevel::Micro) CHECK(b == ScaleLevel::Micro);
    }
}

TEST_CASE("ScaleThresholds validation") {
    CHECK_NOTHROW(ScaleThresholds{}.validate());
    CHECK_THROWS_AS((ScaleThresholds{30, 30}.validate()), InputError);
    CHECK_THROWS_AS((ScaleThresholds{-1, 30}.validate()), InputError);
}

TEST_CASE("derive_meso_threshold") {
    SUBCASE("cells with 2, 4 and 10 intersections") {
        std::vector<PlanarPoint> pts;
        for (int i = 0; i < 2; ++i) pts.push_back({100.0 + i, 500});
        for (int i = 0; i < 4; ++i) pts.push_back({1100.0 + i, 500});
        for (int i = 0; i < 10; ++i) pts.push_back({2100.0 + i, 500});
        CHECK(derive_meso_threshold({0, 0, 3000, 1000}, pts, 1.0) == 4);
    }
    SUBCASE("one intersection per cell") {
        const auto pts = grid_points(5, 1000.0, 500.0);
        CHECK(derive_meso_threshold({0, 0, 5000, 5000}, pts, 1.0) == 1);
    }
    SUBCASE("empty cells are excluded") {
        std::vector<PlanarPoint> pts(6, PlanarPoint{100, 100});
        CHECK(derive_meso_threshold({0, 0, 10000, 10000}, pts, 1.0) == 6);
    }
    SUBCASE("even count median rounds half up") {
        std::vector<PlanarPoint> pts{{100, 100}, {1100, 100}, {1200, 100}};  // counts {1, 2}
        CHECK(derive_meso_threshold({0, 0, 2000, 1000}, pts, 1.0) == 2);
    }
    SUBCASE("scale consistency on a uniform grid") {
        const auto pts = grid_points(50, 200.0, 100.0);  // 25 per km²
        const int one = derive_meso_threshold({0, 0, 10000, 10000}, pts, 1.0);
        const int two = derive_meso_threshold({0, 0, 10000, 10000}, pts, 2.0);
        CHECK(one == 25);
        CHECK(std::abs(two - 4 * one) <= 1);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(derive_meso_threshold({0, 0, 1000, 1000}, {}, 1.0), DerivationError);
        const std::vector<PlanarPoint> outside{{5000, 5000}};
        CHECK_THROWS_AS(derive_meso_threshold({0, 0, 1000, 1000}, outside, 1.0), InputError);
        CHECK_THROWS_AS(derive_meso_threshold({0, 0, 1000, 1000}, outside, 0.0), InputError);
    }
}

TEST_CASE("build_units") {
    SUBCASE("one 1 km square cluster holding 5 intersections") {
        const auto pts = square(0, 0, 1000);
        ClusterResult r{{0}, {0, 0, 0, 0}, true, 10, 0.0};
        const std::vector<PlanarPoint> inter{{100, 100}, {200, 800}, {500, 500}, {900, 900}, {999, 1}, {2000, 2000}};
        const auto out = build_units(r, pts, inter, ScaleThresholds{}, 0.5);
        REQUIRE(out.units.size() == 1);
        CHECK(out.units[0].n_intersections == 5);
        CHECK(out.units[0].n_points == 4);
        CHECK(out.cell.median_intersections == 5.0);
        CHECK(out.cell.level == ScaleLevel::Meso);
        CHECK(out.cell.median_area_km2 == doctest::Approx(1.0));
        CHECK(out.cell.n_clusters == 1);
        CHECK(out.cell.sample_size == 4);
        CHECK(out.cell.q == 0.5);
    }
    SUBCASE("all singletons and no intersections") {
        const std::vector<PlanarPoint> pts{{0, 0}, {500, 0}, {0, 500}};
        ClusterResult r{{0, 1, 2}, {0, 1, 2}, true, 5, 0.0};
        const std::vector<PlanarPoint> inter{{5000, 5000}};
        const auto out = build_units(r, pts, inter, ScaleThresholds{}, 1.0);
        CHECK(out.units.size() == 3);
        CHECK(out.cell.median_intersections == 0.0);
        CHECK(out.cell.level == ScaleLevel::Micro);
        CHECK(out.cell.median_area_km2 == doctest::Approx(9e-4));
    }
    SUBCASE("counts {1, 45} give median 23, meso") {
        auto pts = square(0, 0, 1000);
        for (const auto& p : square(10000, 0, 1000)) pts.push_back(p);
        ClusterResult r{{0, 4}, {0, 0, 0, 0, 4, 4, 4, 4}, true, 5, 0.0};
        std::vector<PlanarPoint> inter{{500, 500}};
        for (int i = 0; i < 45; ++i) inter.push_back({10010.0 + 20.0 * i, 500});
        const auto out = build_units(r, pts, inter, ScaleThresholds{}, 0.75);
        CHECK(out.units[0].n_intersections == 1);
        CHECK(out.units[1].n_intersections == 45);
        CHECK(out.units[0].level == ScaleLevel::Micro);
        CHECK(out.units[1].level == ScaleLevel::Macro);
        CHECK(out.cell.median_intersections == 23.0);
        CHECK(out.cell.level == ScaleLevel::Meso);
    }
    SUBCASE("malformed results are rejected") {
        const auto pts = square(0, 0, 10);
        CHECK_THROWS_AS(build_units(ClusterResult{{0}, {0, 0}, true, 1, 0}, pts, {}, {}, 0.5), InputError);
        CHECK_THROWS_AS(build_units(ClusterResult{{0}, {0, 1, 0, 0}, true, 1, 0}, pts, {}, {}, 0.5), InputError);
    }
}

TEST_CASE("property: units partition the points") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> q(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto pts = testkit::uniform_points(20 + seed, 2000.0, seed);
        const auto inter = testkit::uniform_points(30, 2000.0, seed + 1000);
        ApcConfig cfg;
        cfg.q = q(rng);
        cfg.max_iterations = 300;
        cfg.convergence_window = 30;
        const auto r = run_apc(pts, cfg);
        const auto out = build_units(r, pts, inter, ScaleThresholds{}, cfg.q);
        std::size_t total = 0;
        for (const auto& ua : out.units) {
            total += ua.n_points;
            CHECK(ua.n_points >= 1);
            CHECK(ua.polygon.area_km2 > 0.0);
            CHECK(ua.level == classify_level(static_cast<double>(ua.n_intersections)));
        }
        CHECK(total == pts.size());
        CHECK(out.cell.n_clusters == r.exemplars.size());
    }
}
