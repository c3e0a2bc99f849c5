#include <algorithm>
#include <limits>
#include <vector>

#include "apclust/kernels.hpp"

namespace apclust::kernels::serial {

void responsibilities(MatrixView s, std::span<const double> a, std::span<double> r, double damping) {
    const std::size_t n = s.n;
    const double keep = damping;
    const double take = 1.0 - damping;
    const double neg_inf = -std::numeric_limits<double>::infinity();

    if (n == 1) {
        r[0] = keep * r[0] + take * s.s[0];
        return;
    }

    for (std::size_t i = 0; i < n; ++i) {
        double best = neg_inf;
        double second = neg_inf;
        std::size_t best_k = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = a[i * n + k] + s.s[i * n + k];
            if (v > best) {
                second = best;
                best = v;
                best_k = k;
            } else if (v > second) {
                second = v;
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double rival = (k == best_k) ? second : best;
            const double raw = s.s[i * n + k] - rival;
            r[i * n + k] = keep * r[i * n + k] + take * raw;
        }
    }
}

void availabilities(std::span<const double> r, std::span<double> a, std::size_t n, double damping) {
    const double keep = damping;
    const double take = 1.0 - damping;

    for (std::size_t k = 0; k < n; ++k) {
        double support = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != k) support += std::max(0.0, r[i * n + k]);
        }
        const double self_resp = r[k * n + k];
        for (std::size_t i = 0; i < n; ++i) {
            double raw;
            if (i == k) {
                raw = support;
            } else {
                raw = std::min(0.0, self_resp + (support - std::max(0.0, r[i * n + k])));
            }
            a[i * n + k] = keep * a[i * n + k] + take * raw;
        }
    }
}

}  // namespace apclust::kernels::serial
