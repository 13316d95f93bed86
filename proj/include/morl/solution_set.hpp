#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "morl/types.hpp"

namespace morl {

// ---------------------------------------------------------------------------
// Dominance relations
// ---------------------------------------------------------------------------

/// Pareto dominance: a weakly improves every component and strictly improves
/// at least one. Comparisons are exact on the stored binary64 values;
/// tolerances belong to the metrics that declare them, not to the algebra.
inline bool pareto_dominates(const ValueVector& a, const ValueVector& b) {
    check_same_dimension(a, b, "pareto_dominates");
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return false;
        if (a[i] > b[i]) strict = true;
    }
    return strict;
}

inline bool weakly_dominates(const ValueVector& a, const ValueVector& b) {
    check_same_dimension(a, b, "weakly_dominates");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < b[i]) return false;
    return true;
}

/// Sorted-ascending cumulative sums; the last component is the plain sum.
inline ValueVector lorenz_vector(ValueVector v) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i) v[i] += v[i - 1];
    return v;
}

/// Pareto dominance applied to Lorenz vectors (fairness-sensitive order).
inline bool lorenz_dominates(const ValueVector& a, const ValueVector& b) {
    check_same_dimension(a, b, "lorenz_dominates");
    return pareto_dominates(lorenz_vector(a), lorenz_vector(b));
}

// ---------------------------------------------------------------------------
// Weight vectors and linear scalarisation
// ---------------------------------------------------------------------------

/// Nonnegative weights summing to 1 (validated on construction).
class WeightVector {
public:
    explicit WeightVector(std::vector<double> w) : weights_(std::move(w)) {
        if (weights_.size() < 1) throw std::invalid_argument("WeightVector: empty");
        double sum = 0.0;
        for (double x : weights_) {
            if (!(x >= 0.0)) throw std::invalid_argument("WeightVector: negative weight");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("WeightVector: weights must sum to 1 (got " + std::to_string(sum) + ")");
    }

    const std::vector<double>& weights() const { return weights_; }
    std::size_t dimension() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }

private:
    std::vector<double> weights_;
};

/// Inner product w . v.
inline double linear_utility(const WeightVector& w, const ValueVector& v) {
    return dot(w.weights(), v);
}

/// Probability-weighted average of value vectors: the value of the stochastic
/// mixture policy over the given components.
inline ValueVector mixture_value(const std::vector<std::pair<ValueVector, double>>& components) {
    if (components.empty()) throw std::invalid_argument("mixture_value: empty mixture");
    double psum = 0.0;
    for (const auto& [v, p] : components) {
        if (!(p >= 0.0)) throw std::invalid_argument("mixture_value: negative probability");
        psum += p;
    }
    if (std::abs(psum - 1.0) > 1e-9)
        throw std::invalid_argument("mixture_value: probabilities must sum to 1");
    ValueVector out(components.front().first.size(), 0.0);
    for (const auto& [v, p] : components) {
        check_same_dimension(v, components.front().first, "mixture_value");
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += p * v[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solution sets
// ---------------------------------------------------------------------------

enum class PruningState { raw, pareto_pruned, ccs_pruned };

struct SolutionEntry {
    std::string policy_id;
    ValueVector value;
};

/// Finite collection of (policy handle, value vector) pairs.
struct SolutionSet {
    std::vector<SolutionEntry> entries;
    PruningState pruning_state = PruningState::raw;

    void add(std::string policy_id, ValueVector value) {
        entries.push_back({std::move(policy_id), std::move(value)});
        pruning_state = PruningState::raw;
    }

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }

    std::size_t dimension() const {
        return entries.empty() ? 0 : entries.front().value.size();
    }

    std::vector<ValueVector> values() const {
        std::vector<ValueVector> out;
        out.reserve(entries.size());
        for (const auto& e : entries) out.push_back(e.value);
        return out;
    }

    bool contains_value(const ValueVector& v) const {
        for (const auto& e : entries)
            if (e.value == v) return true;
        return false;
    }
};

namespace detail {

enum class DuplicateRule { first_by_insertion, lowest_policy_id };

/// Collapses entries with bit-identical value vectors to one representative.
inline std::vector<std::size_t> collapse_duplicates(const SolutionSet& set, DuplicateRule rule) {
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
        bool replaced = false, duplicate = false;
        for (std::size_t& r : reps) {
            if (set.entries[r].value == set.entries[i].value) {
                duplicate = true;
                if (rule == DuplicateRule::lowest_policy_id &&
                    set.entries[i].policy_id < set.entries[r].policy_id) {
                    r = i;
                    replaced = true;
                }
                break;
            }
        }
        (void)replaced;
        if (!duplicate) reps.push_back(i);
    }
    return reps;
}

/// Indices (into set.entries) of the maximal non-dominated subset, after
/// duplicate collapse. Sort-assisted: with entries ordered lexicographically
/// descending, any dominator of a point precedes it, so a single pass
/// against the kept list suffices.
inline std::vector<std::size_t> pareto_prune_indices(const SolutionSet& set, DuplicateRule rule) {
    for (const auto& e : set.entries)
        check_same_dimension(e.value, set.entries.front().value, "pareto_prune");

    std::vector<std::size_t> reps = collapse_duplicates(set, rule);
    std::vector<std::size_t> order = reps;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (set.entries[a].value != set.entries[b].value)
            return set.entries[a].value > set.entries[b].value; // lexicographic desc
        return a < b;
    });

    std::vector<std::size_t> kept;
    for (std::size_t idx : order) {
        bool dominated = false;
        for (std::size_t k : kept) {
            if (pareto_dominates(set.entries[k].value, set.entries[idx].value)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) kept.push_back(idx);
    }
    std::sort(kept.begin(), kept.end()); // restore insertion order
    return kept;
}

/// True if some convex combination of a and b weakly dominates v.
/// The feasible lambda range is the intersection of per-objective
/// half-lines; exact arithmetic on the stored values.
inline bool mixture_weakly_dominates(const ValueVector& a, const ValueVector& b, const ValueVector& v) {
    double lo = 0.0, hi = 1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double da = a[i] - b[i];
        const double need = v[i] - b[i];
        if (da == 0.0) {
            if (need > 0.0) return false;
        } else if (da > 0.0) {
            lo = std::max(lo, need / da);
        } else {
            hi = std::min(hi, need / da);
        }
    }
    return lo <= hi;
}

} // namespace detail

/// Maximal non-dominated subset. Value-identical duplicates collapse to the
/// first by insertion order. Empty input yields an empty (pruned) set.
inline SolutionSet pareto_prune(const SolutionSet& set) {
    SolutionSet out;
    out.pruning_state = PruningState::pareto_pruned;
    if (set.entries.empty()) return out;
    for (std::size_t idx : detail::pareto_prune_indices(set, detail::DuplicateRule::first_by_insertion))
        out.entries.push_back(set.entries[idx]);
    return out;
}

/// The standard probe grid: all weight vectors whose components are
/// multiples of 1/resolution (for d=2 this is w0 in {0, 1/200, ..., 1}).
inline std::vector<WeightVector> simplex_weight_grid(std::size_t dimension, int resolution = 200) {
    if (dimension < 1 || resolution < 1)
        throw std::invalid_argument("simplex_weight_grid: bad arguments");
    std::vector<WeightVector> grid;
    std::vector<int> counts(dimension, 0);
    // enumerate compositions of `resolution` into `dimension` parts
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == dimension) {
            counts[pos] = remaining;
            std::vector<double> w(dimension);
            for (std::size_t i = 0; i < dimension; ++i)
                w[i] = static_cast<double>(counts[i]) / resolution;
            grid.emplace_back(std::move(w));
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[pos] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    rec(rec, 0, resolution);
    return grid;
}

/**
 * Minimal subset preserving the maximum of every linear scalarisation.
 *
 * d = 2: exact upper-convex-hull scan after sorting by objective 0.
 * d >= 3: Pareto prune followed by an exact pairwise-mixture dominance
 * filter. Removing a point weakly dominated by a mixture of two others can
 * never lose a scalarised maximum, so the result is conservative: it may
 * keep points only a 3-way mixture covers, but never drops a needed one.
 * The 1/200-per-axis weight grid is the certification contract for the
 * scalarised-max invariant (see simplex_weight_grid).
 *
 * Value-identical entries collapse to the lowest policy_id; entries optimal
 * only at boundary weights survive only if Pareto-non-dominated.
 */
inline SolutionSet ccs_prune(const SolutionSet& set) {
    SolutionSet out;
    out.pruning_state = PruningState::ccs_pruned;
    if (set.entries.empty()) return out;

    std::vector<std::size_t> front =
        detail::pareto_prune_indices(set, detail::DuplicateRule::lowest_policy_id);
    const std::size_t d = set.entries.front().value.size();

    if (d == 2) {
        std::sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
            return set.entries[a].value[0] < set.entries[b].value[0];
        });
        // upper hull: keep points strictly above the chord of their neighbours
        std::vector<std::size_t> hull;
        auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
            const ValueVector& vo = set.entries[o].value;
            const ValueVector& va = set.entries[a].value;
            const ValueVector& vb = set.entries[b].value;
            return (va[0] - vo[0]) * (vb[1] - vo[1]) - (va[1] - vo[1]) * (vb[0] - vo[0]);
        };
        for (std::size_t idx : front) {
            while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), idx) >= 0.0)
                hull.pop_back();
            hull.push_back(idx);
        }
        std::sort(hull.begin(), hull.end());
        for (std::size_t idx : hull) out.entries.push_back(set.entries[idx]);
        return out;
    }

    std::vector<std::size_t> current = front;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t vi = 0; vi < current.size() && !changed; ++vi) {
            const ValueVector& v = set.entries[current[vi]].value;
            for (std::size_t ai = 0; ai < current.size() && !changed; ++ai) {
                if (ai == vi) continue;
                for (std::size_t bi = ai; bi < current.size(); ++bi) {
                    if (bi == vi) continue;
                    if (detail::mixture_weakly_dominates(set.entries[current[ai]].value,
                                                         set.entries[current[bi]].value, v)) {
                        current.erase(current.begin() + static_cast<std::ptrdiff_t>(vi));
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    std::sort(current.begin(), current.end());
    for (std::size_t idx : current) out.entries.push_back(set.entries[idx]);
    return out;
}

/// Best linearly scalarised value in the set for weight w.
inline double scalarised_max(const SolutionSet& set, const WeightVector& w) {
    if (set.entries.empty()) throw std::invalid_argument("scalarised_max: empty set");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : set.entries) best = std::max(best, linear_utility(w, e.value));
    return best;
}

} // namespace morl
