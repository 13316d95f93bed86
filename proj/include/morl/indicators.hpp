#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "morl/rng.hpp"
#include "morl/solution_set.hpp"
#include "morl/utility.hpp"

namespace morl {

/// A point weakly dominated by every set member it is scored against
/// (component-wise lower bound). Never auto-derived here: the experiment
/// layer fixes it as the worst return observed over the whole run.
struct ReferencePoint {
    ValueVector components;
};

namespace detail {

inline void check_reference(const SolutionSet& set, const ReferencePoint& ref) {
    if (set.empty()) throw std::invalid_argument("hypervolume: empty set");
    if (ref.components.size() != set.dimension())
        throw std::invalid_argument("hypervolume: reference point dimension mismatch");
    for (const auto& e : set.entries)
        for (std::size_t i = 0; i < ref.components.size(); ++i)
            if (e.value[i] < ref.components[i])
                throw std::invalid_argument(
                    "hypervolume: reference point must be weakly dominated by every set member");
}

/// 2-d sweep over points shifted to a zero reference: sort by x descending
/// and accumulate each strip above the best y seen so far.
inline double hv2(std::vector<ValueVector> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const ValueVector& a, const ValueVector& b) { return a[0] > b[0]; });
    double area = 0.0, best_y = 0.0;
    for (const auto& p : pts) {
        if (p[1] > best_y) {
            area += p[0] * (p[1] - best_y);
            best_y = p[1];
        }
    }
    return area;
}

/// 3-d slicing: process points by z descending; each z-slab contributes the
/// 2-d hypervolume of the projections seen so far times the slab height.
inline double hv3(std::vector<ValueVector> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const ValueVector& a, const ValueVector& b) { return a[2] > b[2]; });
    double volume = 0.0;
    std::vector<ValueVector> projected;
    std::size_t i = 0;
    while (i < pts.size()) {
        const double z_top = pts[i][2];
        while (i < pts.size() && pts[i][2] == z_top) {
            projected.push_back({pts[i][0], pts[i][1]});
            ++i;
        }
        const double z_bottom = (i < pts.size()) ? pts[i][2] : 0.0;
        volume += hv2(projected) * (z_top - z_bottom);
    }
    return volume;
}

} // namespace detail

/**
 * Lebesgue measure of the union of boxes [ref, v] over the set members.
 * Exact sweep for d = 2 and exact slicing for d = 3; dominated members
 * contribute nothing. d >= 4 is not provided.
 */
inline double hypervolume(const SolutionSet& set, const ReferencePoint& ref) {
    detail::check_reference(set, ref);
    const std::size_t d = set.dimension();
    if (d != 2 && d != 3)
        throw std::invalid_argument("hypervolume: unsupported dimension d=" + std::to_string(d) +
                                    " (only d=2 and d=3 are provided)");
    std::vector<ValueVector> shifted;
    shifted.reserve(set.size());
    for (const auto& e : set.entries) {
        ValueVector p(d);
        for (std::size_t i = 0; i < d; ++i) p[i] = e.value[i] - ref.components[i];
        shifted.push_back(std::move(p));
    }
    return d == 2 ? detail::hv2(std::move(shifted)) : detail::hv3(std::move(shifted));
}

/// Mean squared gap between consecutive sorted per-objective values of a
/// front approximation; 0 for a singleton (no gaps). Lower is denser.
inline double sparsity(const SolutionSet& set) {
    if (set.empty()) throw std::invalid_argument("sparsity: empty set");
    const std::size_t n = set.size();
    if (n == 1) return 0.0;
    const std::size_t d = set.dimension();
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> column;
        column.reserve(n);
        for (const auto& e : set.entries) column.push_back(e.value[j]);
        std::sort(column.begin(), column.end());
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double gap = column[i + 1] - column[i];
            total += gap * gap;
        }
    }
    return total / static_cast<double>(n - 1);
}

/// Smallest additive slack with which s covers the reference front:
/// max over reference points of min over s of the worst per-objective
/// deficit. Negative when s dominates the reference front.
inline double epsilon_additive(const SolutionSet& s, const SolutionSet& reference_front) {
    if (s.empty() || reference_front.empty())
        throw std::invalid_argument("epsilon_additive: empty set");
    if (s.dimension() != reference_front.dimension())
        throw std::invalid_argument("epsilon_additive: dimension mismatch");
    double eps = -std::numeric_limits<double>::infinity();
    for (const auto& ref : reference_front.entries) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& cand : s.entries) {
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < ref.value.size(); ++i)
                worst = std::max(worst, ref.value[i] - cand.value[i]);
            best = std::min(best, worst);
        }
        eps = std::max(eps, best);
    }
    return eps;
}

/// Multiplicative counterpart: smallest eps with every reference point
/// covered within factor (1 + eps). Factor semantics are undefined across
/// zero, so both fronts must be strictly positive.
inline double epsilon_multiplicative(const SolutionSet& s, const SolutionSet& reference_front) {
    if (s.empty() || reference_front.empty())
        throw std::invalid_argument("epsilon_multiplicative: empty set");
    if (s.dimension() != reference_front.dimension())
        throw std::invalid_argument("epsilon_multiplicative: dimension mismatch");
    auto check_positive = [](const SolutionSet& set, const char* which) {
        for (const auto& e : set.entries)
            for (double x : e.value)
                if (!(x > 0.0))
                    throw std::domain_error(std::string("epsilon_multiplicative: ") + which +
                                            " has a non-positive component");
    };
    check_positive(reference_front, "reference front");
    check_positive(s, "solution set");
    double eps = -std::numeric_limits<double>::infinity();
    for (const auto& ref : reference_front.entries) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& cand : s.entries) {
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < ref.value.size(); ++i)
                worst = std::max(worst, ref.value[i] / cand.value[i]);
            best = std::min(best, worst);
        }
        eps = std::max(eps, best - 1.0);
    }
    return eps;
}

struct CoverageRatio {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/**
 * Precision/recall of recovering the coverage set cs from s, with
 * membership decided by relative L1 distance below eps. The recall side
 * counts each cs entry at most once, however many members of s fall within
 * eps of it, so recall can never exceed 1.
 */
inline CoverageRatio coverage_ratio(const SolutionSet& s, const SolutionSet& cs, double eps) {
    if (cs.empty()) throw std::invalid_argument("coverage_ratio: empty coverage set");
    if (!(eps > 0.0)) throw std::invalid_argument("coverage_ratio: eps must be > 0");
    if (!s.empty() && s.dimension() != cs.dimension())
        throw std::invalid_argument("coverage_ratio: dimension mismatch");

    std::vector<double> cs_norms;
    for (const auto& e : cs.entries) {
        double n1 = 0.0;
        for (double x : e.value) n1 += std::abs(x);
        if (n1 == 0.0) throw std::domain_error("coverage_ratio: coverage-set entry with zero L1 norm");
        cs_norms.push_back(n1);
    }

    std::vector<bool> matched(cs.size(), false);
    std::size_t members = 0;
    for (const auto& e : s.entries) {
        bool in_cs = false;
        for (std::size_t j = 0; j < cs.size(); ++j) {
            double diff = 0.0;
            for (std::size_t i = 0; i < e.value.size(); ++i)
                diff += std::abs(e.value[i] - cs.entries[j].value[i]);
            if (diff / cs_norms[j] < eps) {
                in_cs = true;
                matched[j] = true;
            }
        }
        if (in_cs) ++members;
    }

    CoverageRatio out;
    if (!s.empty()) out.precision = static_cast<double>(members) / static_cast<double>(s.size());
    const std::size_t recalled = static_cast<std::size_t>(std::count(matched.begin(), matched.end(), true));
    out.recall = static_cast<double>(recalled) / static_cast<double>(cs.size());
    if (out.precision + out.recall > 0.0)
        out.f_score = 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

// ---------------------------------------------------------------------------
// Utility-based metrics
// ---------------------------------------------------------------------------

/// Prior over user utility functions: either uniform over linear
/// scalarisations on the weight simplex, or an explicit finite family.
struct UtilityPrior {
    enum class Kind { uniform_linear_simplex, explicit_list };

    Kind kind = Kind::uniform_linear_simplex;
    int sample_count = 10000;
    std::uint64_t seed = 0;
    std::vector<std::pair<UtilityFunction, double>> utilities; // explicit_list only

    static UtilityPrior uniform_linear(int sample_count, std::uint64_t seed) {
        UtilityPrior p;
        p.kind = Kind::uniform_linear_simplex;
        p.sample_count = sample_count;
        p.seed = seed;
        return p;
    }

    static UtilityPrior explicit_family(std::vector<std::pair<UtilityFunction, double>> utilities,
                                        int sample_count, std::uint64_t seed) {
        double psum = 0.0;
        for (const auto& [u, p] : utilities) {
            if (!(p >= 0.0)) throw std::invalid_argument("UtilityPrior: negative probability");
            psum += p;
        }
        if (std::abs(psum - 1.0) > 1e-9)
            throw std::invalid_argument("UtilityPrior: probabilities must sum to 1");
        UtilityPrior prior;
        prior.kind = Kind::explicit_list;
        prior.sample_count = sample_count;
        prior.seed = seed;
        prior.utilities = std::move(utilities);
        return prior;
    }
};

/// Uniform draw from the (d-1)-simplex via sorted uniform gaps.
inline std::vector<double> sample_simplex_weights(std::size_t dimension, Rng& rng) {
    std::vector<double> cuts;
    cuts.reserve(dimension + 1);
    cuts.push_back(0.0);
    for (std::size_t i = 0; i + 1 < dimension; ++i) cuts.push_back(rng.uniform());
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> w(dimension);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < dimension; ++i) {
        w[i] = cuts[i + 1] - cuts[i];
        acc += w[i];
    }
    w[dimension - 1] = 1.0 - acc; // exact sum-to-1
    return w;
}

/// The prior's Monte Carlo sample: sample_count utilities, deterministic in
/// the prior seed. Shared across the sets being compared, so comparisons
/// are paired and tolerance-free at the sample level.
inline std::vector<UtilityFunction> sample_utilities(const UtilityPrior& prior, std::size_t dimension) {
    if (prior.sample_count < 1) throw std::invalid_argument("UtilityPrior: sample_count must be >= 1");
    std::vector<UtilityFunction> out;
    out.reserve(static_cast<std::size_t>(prior.sample_count));
    Rng rng(prior.seed);
    if (prior.kind == UtilityPrior::Kind::uniform_linear_simplex) {
        for (int k = 0; k < prior.sample_count; ++k)
            out.push_back(UtilityFunction::linear(sample_simplex_weights(dimension, rng)));
    } else {
        if (prior.utilities.empty()) throw std::invalid_argument("UtilityPrior: empty explicit family");
        for (int k = 0; k < prior.sample_count; ++k) {
            double x = rng.uniform(), acc = 0.0;
            std::size_t pick = prior.utilities.size() - 1;
            for (std::size_t i = 0; i < prior.utilities.size(); ++i) {
                acc += prior.utilities[i].second;
                if (x < acc) {
                    pick = i;
                    break;
                }
            }
            out.push_back(prior.utilities[pick].first);
        }
    }
    return out;
}

/**
 * The deterministic search family MUL maximises over. For the uniform
 * linear prior this is a simplex grid (corners included, so boundary
 * weights are searched exactly); the grid resolution is the smallest one
 * with at least sample_count points, capped at 100k points. For an
 * explicit family it is the family itself.
 */
inline std::vector<UtilityFunction> mul_search_family(const UtilityPrior& prior, std::size_t dimension) {
    if (prior.kind == UtilityPrior::Kind::explicit_list) {
        std::vector<UtilityFunction> out;
        for (const auto& [u, p] : prior.utilities) out.push_back(u);
        return out;
    }
    const std::size_t target = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(prior.sample_count, 2)), 100000);
    auto grid_size = [&](int r) {
        // C(r + d - 1, d - 1), saturating
        double n = 1.0;
        for (std::size_t i = 1; i < dimension; ++i)
            n *= static_cast<double>(r + static_cast<int>(i)) / static_cast<double>(i);
        return n;
    };
    int resolution = 1;
    while (grid_size(resolution) < static_cast<double>(target) && resolution < 100000)
        ++resolution;
    while (grid_size(resolution) > 100000.0 && resolution > 1) --resolution;
    std::vector<UtilityFunction> out;
    for (const auto& w : simplex_weight_grid(dimension, resolution))
        out.push_back(UtilityFunction::linear(w));
    return out;
}

inline double best_utility_in_set(const SolutionSet& s, const UtilityFunction& u) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : s.entries) best = std::max(best, u(e.value));
    return best;
}

/// EUM over an explicit utility collection (mean of per-utility set maxima).
inline double eum_on_utilities(const SolutionSet& s, const std::vector<UtilityFunction>& utilities) {
    if (s.empty()) throw std::invalid_argument("expected_utility_metric: empty set");
    if (utilities.empty()) throw std::invalid_argument("expected_utility_metric: no utilities");
    CompensatedSum acc;
    for (const auto& u : utilities) acc.add(best_utility_in_set(s, u));
    return acc.value() / static_cast<double>(utilities.size());
}

/// MUL over an explicit utility collection (max of per-utility gaps).
inline double mul_on_utilities(const SolutionSet& s, const SolutionSet& optimal,
                               const std::vector<UtilityFunction>& utilities) {
    if (s.empty() || optimal.empty()) throw std::invalid_argument("maximum_utility_loss: empty set");
    if (utilities.empty()) throw std::invalid_argument("maximum_utility_loss: no utilities");
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& u : utilities)
        worst = std::max(worst, best_utility_in_set(optimal, u) - best_utility_in_set(s, u));
    return worst;
}

/// Expected utility of the best set member under the prior, by Monte Carlo
/// over prior.sample_count utilities (deterministic given prior.seed).
inline double expected_utility_metric(const SolutionSet& s, const UtilityPrior& prior) {
    if (s.empty()) throw std::invalid_argument("expected_utility_metric: empty set");
    return eum_on_utilities(s, sample_utilities(prior, s.dimension()));
}

/// Worst-case utility gap between the optimal set and s over the family's
/// search grid; >= 0 whenever s is a subset of optimal.
inline double maximum_utility_loss(const SolutionSet& s, const SolutionSet& optimal,
                                   const UtilityPrior& family) {
    if (s.empty() || optimal.empty()) throw std::invalid_argument("maximum_utility_loss: empty set");
    return mul_on_utilities(s, optimal, mul_search_family(family, s.dimension()));
}

} // namespace morl
