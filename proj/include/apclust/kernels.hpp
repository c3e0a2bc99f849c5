#pragma once

// Message-passing kernels in two builds: an OpenMP one used by default and a
// plain serial one kept as the reference for tests and benchmarks. Both sum in
// the same order (rows ascending within each column), so for identical inputs
// they produce bit-identical outputs regardless of thread count.

#include <cstddef>
#include <span>

namespace apclust::kernels {

struct MatrixView {
    std::span<const double> s;
    std::size_t n;
};

namespace serial {
void responsibilities(MatrixView s, std::span<const double> a, std::span<double> r, double damping);
void availabilities(std::span<const double> r, std::span<double> a, std::size_t n, double damping);
}  // namespace serial

namespace omp {
void responsibilities(MatrixView s, std::span<const double> a, std::span<double> r, double damping);
void availabilities(std::span<const double> r, std::span<double> a, std::size_t n, double damping);
}  // namespace omp

/// Threads the OpenMP kernels will use.
int max_threads() noexcept;

}  // namespace apclust::kernels
