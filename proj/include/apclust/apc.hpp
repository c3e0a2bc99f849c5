#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace apclust {

struct PlanarPoint;

/// Dense n×n similarity matrix, row-major. Off-diagonal entries are negative
/// squared distances; the diagonal holds the preference once applied and a
/// NaN sentinel before that.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    explicit SimilarityMatrix(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    bool preference_applied() const noexcept { return preference_applied_; }

    double operator()(std::size_t i, std::size_t k) const noexcept { return s_[i * n_ + k]; }
    double& operator()(std::size_t i, std::size_t k) noexcept { return s_[i * n_ + k]; }

    std::span<const double> row(std::size_t i) const noexcept { return {s_.data() + i * n_, n_}; }
    std::span<const double> values() const noexcept { return s_; }

    /// Preference of point k, i.e. the diagonal entry.
    double preference(std::size_t k) const noexcept { return (*this)(k, k); }

    /// Overwrites the whole diagonal and marks the preference as applied.
    void set_diagonal(double p) noexcept;
    void set_diagonal(std::span<const double> p);

private:
    std::size_t n_ = 0;
    std::vector<double> s_;
    bool preference_applied_ = false;
};

enum class Kernel {
    Parallel,   ///< OpenMP row/column kernels
    Reference,  ///< serial loops, kept as the testing baseline
};

struct ApcConfig {
    double q = 0.5;                       ///< preference quantile in [0, 1]
    double damping = 0.9;                 ///< in [0.5, 1)
    std::size_t max_iterations = 1000;
    std::size_t convergence_window = 100; ///< stable iterations required
    double jitter_scale = 0.0;            ///< absolute noise amplitude on off-diagonals
    std::uint64_t rng_seed = 0;
    /// When false, a run that reaches max_iterations throws ConvergenceError
    /// instead of returning its last decision.
    bool fallback_on_nonconvergence = true;
    /// Re-pick each cluster's exemplar as the member with the highest summed
    /// similarity to its cluster, then reassign. Never lowers net similarity.
    bool refine_exemplars = true;
    Kernel kernel = Kernel::Parallel;

    /// Throws InputError when a field is out of range.
    void validate() const;
};

/// Responsibility and availability messages, row-major n×n.
struct MessageState {
    explicit MessageState(std::size_t n = 0) : n(n), r(n * n, 0.0), a(n * n, 0.0) {}

    std::size_t n = 0;
    std::vector<double> r;
    std::vector<double> a;
    std::size_t iteration = 0;

    double resp(std::size_t i, std::size_t k) const noexcept { return r[i * n + k]; }
    double avail(std::size_t i, std::size_t k) const noexcept { return a[i * n + k]; }
};

struct ExemplarDecision {
    std::vector<std::size_t> exemplars;   ///< ascending
    std::vector<std::size_t> assignment;  ///< per point, an element of exemplars
};

struct ClusterResult {
    std::vector<std::size_t> exemplars;
    std::vector<std::size_t> assignment;
    bool converged = false;
    std::size_t iterations_run = 0;
    double net_similarity = 0.0;

    bool operator==(const ClusterResult&) const = default;
};

/// s(i,k) = −‖x_i − x_k‖² off the diagonal; the diagonal is left as a NaN
/// sentinel. Throws InputError on an empty set or a non-finite coordinate.
SimilarityMatrix build_similarity(std::span<const PlanarPoint> points);

/// Sets every diagonal entry to the q-quantile of the off-diagonal multiset.
/// n = 1 has no off-diagonal values and gets preference 0.
void apply_preference(SimilarityMatrix& m, double q);

/// Sets every diagonal entry to an explicit value.
void apply_preference_value(SimilarityMatrix& m, double p);

/// One damped responsibility sweep:
///   r(i,k) ← damping·r(i,k) + (1−damping)·(s(i,k) − max_{k'≠k}{a(i,k') + s(i,k')}).
/// With n = 1 there are no rivals and the raw value is s(0,0).
void update_responsibilities(const SimilarityMatrix& m, MessageState& state, double damping,
                             Kernel kernel = Kernel::Parallel);

/// One damped availability sweep:
///   a(i,k) = min{0, r(k,k) + Σ_{i'∉{i,k}} max{0, r(i',k)}}   for i ≠ k
///   a(k,k) = Σ_{i'≠k} max{0, r(i',k)}
void update_availabilities(MessageState& state, double damping, Kernel kernel = Kernel::Parallel);

/// Points with a(k,k) + r(k,k) > 0 become exemplars; if none qualifies the
/// single best-scoring point is used. Non-exemplars join the exemplar with the
/// highest similarity, lowest index on ties.
ExemplarDecision decide_exemplars(const SimilarityMatrix& m, const MessageState& state);

/// One medoid pass: each cluster's new exemplar is the member j maximizing
/// Σ_{i in cluster} s(i,j) (lowest index on ties), then every point is
/// reassigned as in decide_exemplars.
ExemplarDecision refine_exemplars(const SimilarityMatrix& m, const ExemplarDecision& decision);

/// Σ s(i, assignment(i)) over non-exemplars plus Σ p(k) over exemplars.
double net_similarity(const SimilarityMatrix& m, std::span<const std::size_t> assignment);

/// Called after each full iteration with the current messages.
using IterationObserver = std::function<void(const MessageState&)>;

/// Full message-passing run on a matrix whose preference is already applied.
/// `config.q` is ignored here. Jitter, when enabled, is added to the matrix
/// copy owned by the run and the reported net similarity uses those values.
ClusterResult run_apc(SimilarityMatrix m, const ApcConfig& config,
                      const IterationObserver& observer = {});

/// build_similarity → apply_preference(config.q) → run.
ClusterResult run_apc(std::span<const PlanarPoint> points, const ApcConfig& config,
                      const IterationObserver& observer = {});

/// Bytes held by the similarity matrix and both message matrices for n points.
std::size_t estimated_run_bytes(std::size_t n) noexcept;

}  // namespace apclust
