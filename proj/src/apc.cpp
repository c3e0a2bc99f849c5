#include "apclust/apc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "apclust/error.hpp"
#include "apclust/geo.hpp"
#include "apclust/kernels.hpp"
#include "apclust/stats.hpp"

namespace apclust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_symmetric(const SimilarityMatrix& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            if (m(i, k) != m(k, i)) return false;
        }
    }
    return true;
}

// q-quantile of the full off-diagonal multiset of a symmetric matrix, computed
// from the upper triangle alone: order statistic j of the doubled multiset is
// order statistic j/2 of the triangle.
double symmetric_offdiag_quantile(const SimilarityMatrix& m, double q) {
    const std::size_t n = m.size();
    std::vector<double> upper;
    upper.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) upper.push_back(m(i, k));
    }

    const std::size_t full = 2 * upper.size();
    const double pos = q * static_cast<double>(full - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);

    auto nth = upper.begin() + static_cast<std::ptrdiff_t>(lo / 2);
    std::nth_element(upper.begin(), nth, upper.end());
    const double lo_val = *nth;
    if (frac == 0.0 || lo + 1 >= full) return lo_val;

    const std::size_t hi_idx = (lo + 1) / 2;
    const double hi_val = (hi_idx == lo / 2) ? lo_val : *std::min_element(nth + 1, upper.end());
    return lo_val + frac * (hi_val - lo_val);
}

double general_offdiag_quantile(const SimilarityMatrix& m, double q) {
    const std::size_t n = m.size();
    std::vector<double> off;
    off.reserve(n * (n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (i != k) off.push_back(m(i, k));
        }
    }
    return quantile_inplace(off, q);
}

std::vector<char> exemplar_flags(const MessageState& st) {
    std::vector<char> flags(st.n);
    for (std::size_t k = 0; k < st.n; ++k) flags[k] = (st.avail(k, k) + st.resp(k, k)) > 0.0;
    return flags;
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t n) : n_(n), s_(n * n, 0.0) {
    for (std::size_t k = 0; k < n; ++k) s_[k * n + k] = kNaN;
}

void SimilarityMatrix::set_diagonal(double p) noexcept {
    for (std::size_t k = 0; k < n_; ++k) s_[k * n_ + k] = p;
    preference_applied_ = true;
}

void SimilarityMatrix::set_diagonal(std::span<const double> p) {
    if (p.size() != n_) throw InputError("preference vector length does not match the matrix");
    for (std::size_t k = 0; k < n_; ++k) s_[k * n_ + k] = p[k];
    preference_applied_ = true;
}

void ApcConfig::validate() const {
    if (!(q >= 0.0 && q <= 1.0)) throw InputError("q must lie in [0, 1]");
    if (!(damping >= 0.5 && damping < 1.0)) throw InputError("damping must lie in [0.5, 1)");
    if (max_iterations == 0) throw InputError("max_iterations must be positive");
    if (convergence_window == 0 || convergence_window >= max_iterations) {
        throw InputError("convergence_window must be positive and below max_iterations");
    }
    if (!(jitter_scale >= 0.0) || !std::isfinite(jitter_scale)) {
        throw InputError("jitter_scale must be a finite non-negative value");
    }
}

SimilarityMatrix build_similarity(std::span<const PlanarPoint> points) {
    if (points.empty()) throw InputError("cannot build a similarity matrix from zero points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
            throw InputError("non-finite coordinate at point index " + std::to_string(i));
        }
    }

    const std::size_t n = points.size();
    SimilarityMatrix m(n);
    const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < sn; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t k = 0; k < n; ++k) {
            if (i == k) continue;
            const double dx = points[i].x - points[k].x;
            const double dy = points[i].y - points[k].y;
            m(i, k) = -(dx * dx + dy * dy);
        }
    }
    return m;
}

void apply_preference(SimilarityMatrix& m, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw InputError("q must lie in [0, 1]");
    if (m.size() == 0) throw InputError("empty similarity matrix");
    if (m.preference_applied()) throw InputError("preference already applied to this matrix");

    if (m.size() == 1) {
        m.set_diagonal(0.0);
        return;
    }
    const double p = is_symmetric(m) ? symmetric_offdiag_quantile(m, q) : general_offdiag_quantile(m, q);
    m.set_diagonal(p);
}

void apply_preference_value(SimilarityMatrix& m, double p) {
    if (!std::isfinite(p)) throw InputError("preference must be finite");
    m.set_diagonal(p);
}

void update_responsibilities(const SimilarityMatrix& m, MessageState& state, double damping, Kernel kernel) {
    if (state.n != m.size()) throw std::logic_error("message state shape does not match the similarity matrix");
    const kernels::MatrixView view{m.values(), m.size()};
    if (kernel == Kernel::Reference) {
        kernels::serial::responsibilities(view, state.a, state.r, damping);
    } else {
        kernels::omp::responsibilities(view, state.a, state.r, damping);
    }
}

void update_availabilities(MessageState& state, double damping, Kernel kernel) {
    if (state.r.size() != state.n * state.n || state.a.size() != state.n * state.n) {
        throw std::logic_error("malformed message state");
    }
    if (kernel == Kernel::Reference) {
        kernels::serial::availabilities(state.r, state.a, state.n, damping);
    } else {
        kernels::omp::availabilities(state.r, state.a, state.n, damping);
    }
}

namespace {

void assign_to_exemplars(const SimilarityMatrix& m, ExemplarDecision& d) {
    const std::size_t n = m.size();
    d.assignment.assign(n, 0);
    std::vector<char> is_exemplar(n, 0);
    for (auto e : d.exemplars) is_exemplar[e] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_exemplar[i]) {
            d.assignment[i] = i;
            continue;
        }
        std::size_t best = d.exemplars.front();
        double best_s = m(i, best);
        for (auto e : d.exemplars) {
            if (m(i, e) > best_s) {
                best_s = m(i, e);
                best = e;
            }
        }
        d.assignment[i] = best;
    }
}

}  // namespace

ExemplarDecision decide_exemplars(const SimilarityMatrix& m, const MessageState& state) {
    const std::size_t n = state.n;
    ExemplarDecision d;
    if (n == 0) return d;

    for (std::size_t k = 0; k < n; ++k) {
        if (state.avail(k, k) + state.resp(k, k) > 0.0) d.exemplars.push_back(k);
    }
    if (d.exemplars.empty()) {
        std::size_t best = 0;
        double best_score = state.avail(0, 0) + state.resp(0, 0);
        for (std::size_t k = 1; k < n; ++k) {
            const double score = state.avail(k, k) + state.resp(k, k);
            if (score > best_score) {
                best_score = score;
                best = k;
            }
        }
        d.exemplars.push_back(best);
    }

    assign_to_exemplars(m, d);
    return d;
}

ExemplarDecision refine_exemplars(const SimilarityMatrix& m, const ExemplarDecision& decision) {
    const std::size_t n = m.size();
    if (decision.assignment.size() != n) throw InputError("assignment does not match the matrix size");
    ExemplarDecision d;
    d.exemplars.reserve(decision.exemplars.size());
    std::vector<std::size_t> members;
    for (auto e : decision.exemplars) {
        members.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (decision.assignment[i] == e) members.push_back(i);
        }
        std::size_t best = e;
        double best_sum = -std::numeric_limits<double>::infinity();
        for (auto j : members) {
            double sum = 0.0;
            for (auto i : members) sum += m(i, j);
            if (sum > best_sum) {
                best_sum = sum;
                best = j;
            }
        }
        d.exemplars.push_back(best);
    }
    std::sort(d.exemplars.begin(), d.exemplars.end());
    assign_to_exemplars(m, d);
    return d;
}

double net_similarity(const SimilarityMatrix& m, std::span<const std::size_t> assignment) {
    double total = 0.0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const std::size_t e = assignment[i];
        total += (e == i) ? m.preference(i) : m(i, e);
    }
    return total;
}

ClusterResult run_apc(SimilarityMatrix m, const ApcConfig& config, const IterationObserver& observer) {
    config.validate();
    const std::size_t n = m.size();
    if (n == 0) throw InputError("clustering requires at least one point");
    if (!m.preference_applied()) throw InputError("preference must be applied before clustering");

    if (n == 1) {
        ClusterResult single;
        single.exemplars = {0};
        single.assignment = {0};
        single.converged = true;
        single.net_similarity = m.preference(0);
        return single;
    }

    if (config.jitter_scale > 0.0) {
        std::mt19937_64 rng(config.rng_seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                if (i != k) m(i, k) += config.jitter_scale * unit(rng);
            }
        }
    }

    MessageState state(n);
    std::vector<char> previous;
    std::size_t stable = 0;
    bool converged = false;

    for (std::size_t it = 1; it <= config.max_iterations; ++it) {
        update_responsibilities(m, state, config.damping, config.kernel);
        update_availabilities(state, config.damping, config.kernel);
        state.iteration = it;
        if (observer) observer(state);

        auto flags = exemplar_flags(state);
        if (flags == previous) {
            ++stable;
        } else {
            stable = 1;
            previous = std::move(flags);
        }
        const bool any = std::find(previous.begin(), previous.end(), char{1}) != previous.end();
        if (any && stable >= config.convergence_window) {
            converged = true;
            break;
        }
    }

    if (!converged && !config.fallback_on_nonconvergence) {
        throw ConvergenceError("no stable exemplar set after " + std::to_string(config.max_iterations) +
                               " iterations");
    }

    auto decision = decide_exemplars(m, state);
    if (config.refine_exemplars) decision = refine_exemplars(m, decision);
    ClusterResult result;
    result.net_similarity = net_similarity(m, decision.assignment);
    result.exemplars = std::move(decision.exemplars);
    result.assignment = std::move(decision.assignment);
    result.converged = converged;
    result.iterations_run = state.iteration;
    return result;
}

ClusterResult run_apc(std::span<const PlanarPoint> points, const ApcConfig& config, const IterationObserver& observer) {
    config.validate();
    auto m = build_similarity(points);
    apply_preference(m, config.q);
    return run_apc(std::move(m), config, observer);
}

std::size_t estimated_run_bytes(std::size_t n) noexcept { return 3 * n * n * sizeof(double); }

}  // namespace apclust
