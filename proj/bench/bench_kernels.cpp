// Serial reference vs OpenMP message-passing kernels.
//
//   ./build/bench/bench_kernels --benchmark_filter=Availabilities
//   APCLUST_THREADS is not read here; use OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "apclust/apc.hpp"
#include "apclust/kernels.hpp"
#include "apclust/testkit.hpp"

namespace {

using namespace apclust;

struct Fixture {
    SimilarityMatrix s;
    MessageState state;

    explicit Fixture(std::size_t n) : state(n) {
        const auto pts = testkit::uniform_points(n, 5000.0, 42);
        s = build_similarity(pts);
        apply_preference(s, 0.5);
        // a few warm-up sweeps so the messages are not all zero
        for (int i = 0; i < 3; ++i) {
            update_responsibilities(s, state, 0.9);
            update_availabilities(state, 0.9);
        }
    }
};

template <Kernel K>
void BM_Responsibilities(benchmark::State& st) {
    Fixture f(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        update_responsibilities(f.s, f.state, 0.9, K);
        benchmark::DoNotOptimize(f.state.r.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}

template <Kernel K>
void BM_Availabilities(benchmark::State& st) {
    Fixture f(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        update_availabilities(f.state, 0.9, K);
        benchmark::DoNotOptimize(f.state.a.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}

template <Kernel K>
void BM_FullRun(benchmark::State& st) {
    const auto pts = testkit::uniform_points(static_cast<std::size_t>(st.range(0)), 5000.0, 7);
    ApcConfig cfg;
    cfg.kernel = K;
    for (auto _ : st) {
        auto r = run_apc(pts, cfg);
        benchmark::DoNotOptimize(r.exemplars.data());
        st.counters["iterations"] = static_cast<double>(r.iterations_run);
    }
}

}  // namespace

BENCHMARK(BM_Responsibilities<Kernel::Reference>)->Name("Responsibilities/serial")->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_Responsibilities<Kernel::Parallel>)->Name("Responsibilities/omp")->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_Availabilities<Kernel::Reference>)->Name("Availabilities/serial")->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_Availabilities<Kernel::Parallel>)->Name("Availabilities/omp")->Arg(500)->Arg(1000)->Arg(2000);
BENCHMARK(BM_FullRun<Kernel::Reference>)->Name("FullRun/serial")->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullRun<Kernel::Parallel>)->Name("FullRun/omp")->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
