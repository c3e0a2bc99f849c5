#include <algorithm>
#include <limits>
#include <vector>

#include <omp.h>

#include "apclust/kernels.hpp"

namespace apclust::kernels {

int max_threads() noexcept { return omp_get_max_threads(); }

namespace omp {

void responsibilities(MatrixView s, std::span<const double> a, std::span<double> r, double damping) {
    const auto n = static_cast<std::ptrdiff_t>(s.n);
    const double keep = damping;
    const double take = 1.0 - damping;
    const double neg_inf = -std::numeric_limits<double>::infinity();

    if (n == 1) {
        r[0] = keep * r[0] + take * s.s[0];
        return;
    }

    const double* sp = s.s.data();
    const double* ap = a.data();
    double* rp = r.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* srow = sp + i * n;
        const double* arow = ap + i * n;
        double* rrow = rp + i * n;

        double best = neg_inf;
        double second = neg_inf;
        std::ptrdiff_t best_k = 0;
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            const double v = arow[k] + srow[k];
            if (v > best) {
                second = best;
                best = v;
                best_k = k;
            } else if (v > second) {
                second = v;
            }
        }
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            const double rival = (k == best_k) ? second : best;
            rrow[k] = keep * rrow[k] + take * (srow[k] - rival);
        }
    }
}

void availabilities(std::span<const double> r, std::span<double> a, std::size_t n_, double damping) {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    const double keep = damping;
    const double take = 1.0 - damping;
    const double* rp = r.data();
    double* ap = a.data();

    std::vector<double> support(n_, 0.0);
    std::vector<double> self_resp(n_);
    double* sup = support.data();

    // Column sums: each thread owns a contiguous block of columns and walks
    // the rows in order, so every column is summed top to bottom exactly as
    // the serial kernel does.
#pragma omp parallel
    {
        const std::ptrdiff_t nt = omp_get_num_threads();
        const std::ptrdiff_t t = omp_get_thread_num();
        const std::ptrdiff_t k0 = n * t / nt;
        const std::ptrdiff_t k1 = n * (t + 1) / nt;
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double* rrow = rp + i * n;
            for (std::ptrdiff_t k = k0; k < k1; ++k) {
                if (i != k) sup[k] += std::max(0.0, rrow[k]);
            }
        }
    }

    for (std::ptrdiff_t k = 0; k < n; ++k) self_resp[static_cast<std::size_t>(k)] = rp[k * n + k];
    const double* selfp = self_resp.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double* rrow = rp + i * n;
        double* arow = ap + i * n;
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            double raw;
            if (i == k) {
                raw = sup[k];
            } else {
                raw = std::min(0.0, selfp[k] + (sup[k] - std::max(0.0, rrow[k])));
            }
            arow[k] = keep * arow[k] + take * raw;
        }
    }
}

}  // namespace omp
}  // namespace apclust::kernels
