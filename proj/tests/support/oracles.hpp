// Independent brute-force oracles used to verify the library's algorithms.
// Everything here deliberately avoids the implementation paths it checks:
// all-pairs dominance scans, compressed-grid volume counting, generic
// Pareto dynamic programming and plain scalar value iteration.

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "morl/envs/deep_sea_treasure.hpp"
#include "morl/momdp.hpp"
#include "morl/rng.hpp"
#include "morl/solution_set.hpp"

namespace oracles {

using morl::ValueVector;

inline bool dominates(const ValueVector& a, const ValueVector& b) {
    bool ge = true, gt = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) ge = false;
        if (a[i] > b[i]) gt = true;
    }
    return ge && gt;
}

/// O(n^2) all-pairs non-dominated filter with first-by-insertion duplicate
/// collapse, mirroring the spec wording directly.
inline std::vector<ValueVector> brute_force_pareto(const std::vector<ValueVector>& points) {
    std::vector<ValueVector> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < points.size() && !drop; ++j) {
            if (j == i) continue;
            if (dominates(points[j], points[i])) drop = true;
            if (points[j] == points[i] && j < i) drop = true;
        }
        if (!drop) kept.push_back(points[i]);
    }
    return kept;
}

/// Exact hypervolume by coordinate compression: the union of boxes
/// [ref, v] is a union of grid cells, and a cell is covered iff some point
/// weakly dominates its upper corner.
inline double grid_count_hypervolume(const std::vector<ValueVector>& points,
                                     const ValueVector& ref) {
    const std::size_t d = ref.size();
    std::vector<std::vector<double>> coords(d);
    for (std::size_t i = 0; i < d; ++i) {
        coords[i].push_back(ref[i]);
        for (const auto& p : points) coords[i].push_back(std::max(p[i], ref[i]));
        std::sort(coords[i].begin(), coords[i].end());
        coords[i].erase(std::unique(coords[i].begin(), coords[i].end()), coords[i].end());
    }
    auto covered = [&](const ValueVector& corner) {
        for (const auto& p : points) {
            bool ok = true;
            for (std::size_t i = 0; i < d && ok; ++i) ok = p[i] >= corner[i];
            if (ok) return true;
        }
        return false;
    };
    double volume = 0.0;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        bool valid = true;
        for (std::size_t i = 0; i < d; ++i)
            if (idx[i] + 1 >= coords[i].size()) valid = false;
        if (valid) {
            ValueVector corner(d);
            double cell = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                corner[i] = coords[i][idx[i] + 1];
                cell *= coords[i][idx[i] + 1] - coords[i][idx[i]];
            }
            if (covered(corner)) volume += cell;
        }
        std::size_t carry = 0;
        while (carry < d && ++idx[carry] + 1 >= coords[carry].size()) idx[carry++] = 0;
        if (carry == d) break;
    }
    return volume;
}

/// Generic Pareto dynamic programming over the time-expanded Deep Sea
/// Treasure graph: per-cell sets of undominated partial returns, advanced
/// one move at a time. Exhausts every deterministic path outcome without
/// assuming anything about path shapes.
inline std::vector<ValueVector> dst_front_by_pareto_dp(const morl::DeepSeaTreasureConfig& config,
                                                       int max_steps = 30) {
    constexpr int R = morl::DeepSeaTreasureConfig::rows;
    constexpr int C = morl::DeepSeaTreasureConfig::cols;
    using CellSets = std::map<std::pair<int, int>, std::vector<ValueVector>>;

    auto insert_undominated = [](std::vector<ValueVector>& set, const ValueVector& v) {
        for (const auto& existing : set)
            if (existing == v || dominates(existing, v)) return false;
        set.erase(std::remove_if(set.begin(), set.end(),
                                 [&](const ValueVector& e) { return dominates(v, e); }),
                  set.end());
        set.push_back(v);
        return true;
    };

    CellSets live;
    live[{0, 0}] = {{0.0, 0.0}};
    std::vector<ValueVector> finished;

    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    for (int t = 0; t < max_steps; ++t) {
        CellSets next;
        for (const auto& [cell, returns] : live) {
            for (int a = 0; a < 4; ++a) {
                int nr = cell.first + dr[a], nc = cell.second + dc[a];
                if (!config.passable(nr, nc)) {
                    nr = cell.first;
                    nc = cell.second;
                }
                for (const auto& ret : returns) {
                    ValueVector advanced = ret;
                    advanced[1] += config.step_penalty;
                    if (config.is_treasure(nr, nc)) {
                        advanced[0] += config.treasure_values[static_cast<std::size_t>(nc)];
                        insert_undominated(finished, advanced);
                    } else {
                        insert_undominated(next[{nr, nc}], advanced);
                    }
                }
            }
        }
        live.swap(next);
    }
    return brute_force_pareto(finished);
}

/// Plain scalar value iteration on the w-scalarised model (the single
/// objective CHVI must agree with on every weight).
inline std::vector<double> scalar_value_iteration(const morl::MomdpModel& model,
                                                  const std::vector<double>& w,
                                                  double tolerance = 1e-12,
                                                  int max_sweeps = 2000000) {
    const int n = model.num_states();
    std::vector<double> value(static_cast<std::size_t>(n), 0.0);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double delta = 0.0;
        std::vector<double> next(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < model.num_actions(); ++a) {
                double q = 0.0;
                for (const auto& tr : model.successors(s, a))
                    q += tr.probability *
                         (morl::dot(w, tr.reward) + model.gamma() * value[static_cast<std::size_t>(tr.next_state)]);
                best = std::max(best, q);
            }
            next[static_cast<std::size_t>(s)] = best;
            delta = std::max(delta, std::abs(best - value[static_cast<std::size_t>(s)]));
        }
        value.swap(next);
        if (delta <= tolerance) break;
    }
    return value;
}

/// Random solution set for stress tests.
inline morl::SolutionSet random_set(morl::Rng& rng, std::size_t n, std::size_t d, double lo = 0.0,
                                    double hi = 1.0) {
    morl::SolutionSet s;
    for (std::size_t i = 0; i < n; ++i) {
        ValueVector v(d);
        for (auto& x : v) x = rng.uniform(lo, hi);
        s.add("p" + std::to_string(i), std::move(v));
    }
    return s;
}

/// Random finite MOMDP with every transition row a normalised distribution.
inline morl::MomdpModel random_model(morl::Rng& rng, int num_states, int num_actions,
                                     int num_objectives, double gamma) {
    std::vector<double> initial(static_cast<std::size_t>(num_states), 0.0);
    initial[0] = 1.0;
    morl::MomdpModel model(num_states, num_actions, num_objectives, gamma, std::move(initial));
    for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < num_actions; ++a) {
            const int branches = 1 + static_cast<int>(rng.below(2));
            std::vector<int> targets;
            std::vector<double> probs;
            double total = 0.0;
            for (int b = 0; b < branches; ++b) {
                targets.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(num_states))));
                const double p = rng.uniform(0.1, 1.0);
                probs.push_back(p);
                total += p;
            }
            for (int b = 0; b < branches; ++b) {
                ValueVector reward(static_cast<std::size_t>(num_objectives));
                for (auto& r : reward) r = rng.uniform(-1.0, 1.0);
                model.add_transition(s, a, targets[static_cast<std::size_t>(b)],
                                     probs[static_cast<std::size_t>(b)] / total, std::move(reward));
            }
        }
    }
    model.validate();
    return model;
}

} // namespace oracles
