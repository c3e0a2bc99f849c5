#pragma once

#include <span>
#include <vector>

namespace apclust {

/// Quantile of `values` with linear interpolation between order statistics
/// (position q·(n−1) in the sorted sequence). q = 0 is the minimum, q = 1 the
/// maximum. Throws InputError on an empty range or q outside [0, 1].
double quantile(std::span<const double> values, double q);

/// quantile(values, 0.5).
double median(std::span<const double> values);

/// In-place variant; reorders `values` (nth_element) instead of copying.
double quantile_inplace(std::vector<double>& values, double q);

}  // namespace apclust
