#pragma once

#include <string>
#include <vector>

#include "morl/momdp.hpp"
#include "morl/solution_set.hpp"

namespace morl {

namespace detail {

/// max over a of min over b of the L-inf point distance.
inline double directed_hausdorff(const std::vector<ValueVector>& a,
                                 const std::vector<ValueVector>& b) {
    if (a.empty()) return 0.0;
    if (b.empty()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& pa : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& pb : b) best = std::min(best, linf_distance(pa, pb));
        worst = std::max(worst, best);
    }
    return worst;
}

inline double hausdorff(const std::vector<ValueVector>& a, const std::vector<ValueVector>& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

/// True when every cycle of the transition graph stays inside absorbing
/// zero-reward states, i.e. all live trajectories terminate. Required for
/// set-valued value iteration at gamma = 1.
inline bool is_episodic_dag(const MomdpModel& model) {
    const int n = model.num_states();
    std::vector<int> color(static_cast<std::size_t>(n), 0); // 0 new, 1 open, 2 done
    std::vector<std::pair<int, std::size_t>> stack;
    std::vector<std::vector<int>> edges(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        if (model.is_absorbing_zero(s)) continue; // terminal sink: no outgoing edges
        for (int a = 0; a < model.num_actions(); ++a)
            for (const auto& tr : model.successors(s, a))
                if (tr.probability > 0.0) edges[static_cast<std::size_t>(s)].push_back(tr.next_state);
    }
    for (int root = 0; root < n; ++root) {
        if (color[static_cast<std::size_t>(root)] != 0) continue;
        stack.push_back({root, 0});
        color[static_cast<std::size_t>(root)] = 1;
        while (!stack.empty()) {
            auto& [s, idx] = stack.back();
            const auto& out = edges[static_cast<std::size_t>(s)];
            if (idx == out.size()) {
                color[static_cast<std::size_t>(s)] = 2;
                stack.pop_back();
                continue;
            }
            const int next = out[idx++];
            if (color[static_cast<std::size_t>(next)] == 1) return false; // back edge
            if (color[static_cast<std::size_t>(next)] == 0) {
                color[static_cast<std::size_t>(next)] = 1;
                stack.push_back({next, 0});
            }
        }
    }
    return true;
}

inline SolutionSet set_from_values(std::vector<ValueVector> values, const std::string& prefix) {
    SolutionSet s;
    for (std::size_t i = 0; i < values.size(); ++i)
        s.add(prefix + std::to_string(i), std::move(values[i]));
    return s;
}

/// Minkowski cross-sum of accumulated vectors with one successor's
/// contribution {p * (r + gamma * v)}, pruned after the combination to keep
/// set growth in check.
inline std::vector<ValueVector> cross_sum(const std::vector<ValueVector>& acc,
                                          const std::vector<ValueVector>& successor_values,
                                          const ValueVector& reward, double probability,
                                          double gamma) {
    std::vector<ValueVector> combined;
    combined.reserve(acc.size() * successor_values.size());
    for (const auto& base : acc) {
        for (const auto& v : successor_values) {
            ValueVector next = base;
            for (std::size_t i = 0; i < next.size(); ++i)
                next[i] += probability * (reward[i] + gamma * v[i]);
            combined.push_back(std::move(next));
        }
    }
    SolutionSet pruned = ccs_prune(set_from_values(std::move(combined), "x"));
    return pruned.values();
}

} // namespace detail

struct ChviResult {
    std::vector<SolutionSet> value_sets; // per-state CCS of value vectors
    int sweeps = 0;
    double final_distance = 0.0;

    const SolutionSet& root_set(const MomdpModel& model) const {
        return value_sets[static_cast<std::size_t>(model.initial_state())];
    }
};

/**
 * Convex-hull value iteration: value iteration over sets of value vectors,
 *   Q(s,a) = sum_{s'} T(s,a,s') * (R(s,a,s') + gamma * V(s'))   (cross-sums)
 *   V(s)   = ccs_prune( union_a Q(s,a) )
 * iterated until the largest per-state Hausdorff distance (L-inf point
 * norm) between successive V-sets is at most `tolerance`. Identifies the
 * convex coverage set, i.e. the solution for every linear utility.
 *
 * gamma = 1 is accepted only for provably episodic models (every cycle
 * confined to absorbing zero-reward states); otherwise the vector sums
 * diverge and the model is rejected.
 */
inline ChviResult chvi(const MomdpModel& model, double tolerance) {
    model.validate();
    if (!(tolerance >= 0.0)) throw std::invalid_argument("chvi: tolerance must be >= 0");
    if (model.gamma() >= 1.0 && !detail::is_episodic_dag(model))
        throw std::invalid_argument(
            "chvi: gamma = 1 requires an episodic model (a cycle outside terminal states was found)");

    const int n = model.num_states();
    const std::size_t d = static_cast<std::size_t>(model.num_objectives());
    std::vector<std::vector<ValueVector>> values(static_cast<std::size_t>(n),
                                                 {ValueVector(d, 0.0)});

    // sweep bound: DAG depth for episodic models, contraction horizon otherwise
    int max_sweeps;
    if (model.gamma() >= 1.0) {
        max_sweeps = n + 2;
    } else {
        max_sweeps = 1000000;
    }

    ChviResult result;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double distance = 0.0;
        std::vector<std::vector<ValueVector>> next(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) {
            std::vector<ValueVector> union_q;
            for (int a = 0; a < model.num_actions(); ++a) {
                std::vector<ValueVector> q{ValueVector(d, 0.0)};
                for (const auto& tr : model.successors(s, a))
                    q = detail::cross_sum(q, values[static_cast<std::size_t>(tr.next_state)],
                                          tr.reward, tr.probability, model.gamma());
                for (auto& v : q) union_q.push_back(std::move(v));
            }
            SolutionSet pruned = detail::set_from_values(std::move(union_q), "q");
            next[static_cast<std::size_t>(s)] = ccs_prune(pruned).values();
            distance = std::max(distance, detail::hausdorff(next[static_cast<std::size_t>(s)],
                                                            values[static_cast<std::size_t>(s)]));
        }
        values.swap(next);
        result.sweeps = sweep + 1;
        result.final_distance = distance;
        if (distance <= tolerance) break;
    }
    if (result.final_distance > tolerance)
        throw std::runtime_error("chvi: did not converge to tolerance " + std::to_string(tolerance) +
                                 " within " + std::to_string(max_sweeps) + " sweeps");

    result.value_sets.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s)
        result.value_sets.push_back(
            detail::set_from_values(std::move(values[static_cast<std::size_t>(s)]),
                                    "s" + std::to_string(s) + "_v"));
    return result;
}

} // namespace morl
