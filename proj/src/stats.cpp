#include "apclust/stats.hpp"

#include <algorithm>
#include <cmath>

#include "apclust/error.hpp"

namespace apclust {

double quantile_inplace(std::vector<double>& values, double q) {
    if (values.empty()) throw InputError("quantile of an empty set");
    if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile level must lie in [0, 1]");

    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);

    auto lo_it = values.begin() + static_cast<std::ptrdiff_t>(lo);
    std::nth_element(values.begin(), lo_it, values.end());
    const double lo_val = *lo_it;
    if (frac == 0.0 || lo + 1 >= values.size()) return lo_val;

    // everything right of lo_it is >= lo_val; the next order statistic is its minimum
    const double hi_val = *std::min_element(lo_it + 1, values.end());
    return lo_val + frac * (hi_val - lo_val);
}

double quantile(std::span<const double> values, double q) {
    std::vector<double> copy(values.begin(), values.end());
    return quantile_inplace(copy, q);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

}  // namespace apclust
