#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include <omp.h>

#include "apclust/apc.hpp"
#include "apclust/kernels.hpp"
#include "apclust/testkit.hpp"

using namespace apclust;

namespace {

// a(i,k) straight from the definition, O(n^3).
std::vector<double> literal_availabilities(const std::vector<double>& r, std::size_t n) {
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            double sum = 0.0;
            for (std::size_t ip = 0; ip < n; ++ip) {
                if (ip == k || (i != k && ip == i)) continue;
                sum += std::max(0.0, r[ip * n + k]);
            }
            a[i * n + k] = (i == k) ? sum : std::min(0.0, r[k * n + k] + sum);
        }
    }
    return a;
}

MessageState random_state(std::size_t n, std::uint64_t seed) {
    MessageState st(n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (auto& x : st.r) x = u(rng);
    for (auto& x : st.a) x = std::min(0.0, u(rng));
    return st;
}

struct ThreadCount {
    int saved = omp_get_max_threads();
    explicit ThreadCount(int n) { omp_set_num_threads(n); }
    ~ThreadCount() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("availability kernels match the literal definition") {
    for (std::size_t n : {1u, 2u, 3u, 7u, 16u}) {
        const auto st0 = random_state(n, 40 + n);
        const auto expected = literal_availabilities(st0.r, n);
        for (auto kernel : {Kernel::Reference, Kernel::Parallel}) {
            auto st = st0;
            update_availabilities(st, 0.0, kernel);
            for (std::size_t j = 0; j < n * n; ++j) {
                CHECK(st.a[j] == doctest::Approx(expected[j]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("OpenMP kernels are bit-identical to the serial reference") {
    for (int threads : {1, 3, 4, 8}) {
        ThreadCount tc(threads);
        for (std::size_t n : {2u, 5u, 31u, 64u, 257u}) {
            auto m = build_similarity(testkit::uniform_points(n, 2000.0, n));
            apply_preference(m, 0.5);
            auto par = random_state(n, 7 * n);
            auto ref = par;
            for (int it = 0; it < 5; ++it) {
                update_responsibilities(m, par, 0.9, Kernel::Parallel);
                update_responsibilities(m, ref, 0.9, Kernel::Reference);
                CHECK(par.r == ref.r);
                update_availabilities(par, 0.9, Kernel::Parallel);
                update_availabilities(ref, 0.9, Kernel::Reference);
                CHECK(par.a == ref.a);
            }
        }
    }
}

TEST_CASE("full runs agree between kernels and across thread counts") {
    const auto pts = testkit::uniform_points(150, 3000.0, 12);
    ApcConfig ref_cfg;
    ref_cfg.kernel = Kernel::Reference;
    const auto ref = run_apc(pts, ref_cfg);
    for (int threads : {1, 2, 5}) {
        ThreadCount tc(threads);
        const auto par = run_apc(pts, ApcConfig{});
        CHECK(par == ref);
    }
}
