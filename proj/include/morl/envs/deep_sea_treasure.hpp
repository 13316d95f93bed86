#pragma once

#include <array>
#include <deque>
#include <optional>

#include <json.hpp>

#include "morl/environment.hpp"
#include "morl/momdp.hpp"
#include "morl/solution_set.hpp"

namespace morl {

/**
 * Deep Sea Treasure gridworld: 11 rows x 10 columns, one treasure per
 * column at increasing depth, objectives (treasure, time) with a -1 time
 * penalty per move. Cells below each column's treasure are impassable
 * seabed; moves into walls or seabed leave the position unchanged.
 * The undiscounted Pareto front is exactly enumerable (10 points).
 */
struct DeepSeaTreasureConfig {
    static constexpr int rows = 11;
    static constexpr int cols = 10;
    std::array<int, 10> treasure_depths{1, 2, 3, 4, 4, 4, 7, 7, 9, 10};
    std::array<double, 10> treasure_values{1, 2, 3, 5, 8, 16, 24, 50, 74, 124};
    double step_penalty = -1.0;
    int horizon = 200;

    bool passable(int row, int col) const {
        return row >= 0 && col >= 0 && col < cols && row <= treasure_depths[static_cast<std::size_t>(col)];
    }

    bool is_treasure(int row, int col) const {
        return col >= 0 && col < cols && row == treasure_depths[static_cast<std::size_t>(col)];
    }

    nlohmann::json to_json() const {
        return {{"name", "deep_sea_treasure"},
                {"rows", rows},
                {"cols", cols},
                {"treasure_depths", treasure_depths},
                {"treasure_values", treasure_values},
                {"step_penalty", step_penalty},
                {"horizon", horizon}};
    }
};

class DeepSeaTreasureEnv : public Environment {
public:
    explicit DeepSeaTreasureEnv(DeepSeaTreasureConfig config = {}) : config_(config) {}

    Observation reset(Rng&) override {
        row_ = 0;
        col_ = 0;
        steps_ = 0;
        done_ = false;
        in_episode_ = true;
        return observation();
    }

    StepResult step(const Action& action, Rng&) override {
        if (!in_episode_) throw std::logic_error("DeepSeaTreasureEnv: step before reset");
        if (done_) throw std::logic_error("DeepSeaTreasureEnv: step after terminal");
        const int* a = std::get_if<int>(&action);
        if (a == nullptr || *a < 0 || *a >= 4)
            throw std::invalid_argument("DeepSeaTreasureEnv: action must be an integer in [0, 4)");

        static constexpr int dr[4] = {-1, 1, 0, 0}; // up, down, left, right
        static constexpr int dc[4] = {0, 0, -1, 1};
        const int nr = row_ + dr[*a];
        const int nc = col_ + dc[*a];
        if (config_.passable(nr, nc)) {
            row_ = nr;
            col_ = nc;
        }
        ++steps_;

        StepResult out;
        out.reward = {0.0, config_.step_penalty};
        if (config_.is_treasure(row_, col_)) {
            out.reward[0] = config_.treasure_values[static_cast<std::size_t>(col_)];
            done_ = true;
        } else if (steps_ >= config_.horizon) {
            done_ = true;
        }
        out.terminal = done_;
        out.observation = observation();
        return out;
    }

    int num_objectives() const override { return 2; }
    int horizon() const override { return config_.horizon; }
    SpaceDesc action_space() const override { return DiscreteSpace{4}; }
    SpaceDesc observation_space() const override {
        return BoxSpace{{0.0, 0.0},
                        {static_cast<double>(DeepSeaTreasureConfig::rows - 1),
                         static_cast<double>(DeepSeaTreasureConfig::cols - 1)}};
    }
    std::unique_ptr<Environment> clone() const override {
        return std::make_unique<DeepSeaTreasureEnv>(config_);
    }
    std::string name() const override { return "deep_sea_treasure"; }
    std::vector<std::string> objective_names() const override { return {"treasure", "time"}; }

    const DeepSeaTreasureConfig& config() const { return config_; }

private:
    Observation observation() const {
        return {static_cast<double>(row_), static_cast<double>(col_)};
    }

    DeepSeaTreasureConfig config_;
    int row_ = 0, col_ = 0, steps_ = 0;
    bool done_ = false, in_episode_ = false;
};

/// Shortest move count from the start to every cell (BFS over passable cells);
/// -1 where unreachable.
inline std::vector<std::vector<int>> dst_shortest_distances(const DeepSeaTreasureConfig& config) {
    std::vector<std::vector<int>> dist(
        DeepSeaTreasureConfig::rows, std::vector<int>(DeepSeaTreasureConfig::cols, -1));
    std::deque<std::pair<int, int>> queue{{0, 0}};
    dist[0][0] = 0;
    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    while (!queue.empty()) {
        auto [r, c] = queue.front();
        queue.pop_front();
        if (config.is_treasure(r, c)) continue; // episode ends here
        for (int k = 0; k < 4; ++k) {
            const int nr = r + dr[k], nc = c + dc[k];
            if (config.passable(nr, nc) && dist[nr][nc] < 0) {
                dist[nr][nc] = dist[r][c] + 1;
                queue.emplace_back(nr, nc);
            }
        }
    }
    return dist;
}

/// The exact undiscounted Pareto front: the best deterministic path to each
/// treasure is its shortest path, and longer paths to the same treasure are
/// dominated, so enumeration reduces to one (value, -distance) point per
/// treasure followed by a Pareto prune.
inline SolutionSet dst_true_front(const DeepSeaTreasureConfig& config = {}) {
    const auto dist = dst_shortest_distances(config);
    SolutionSet all;
    for (int c = 0; c < DeepSeaTreasureConfig::cols; ++c) {
        const int depth = config.treasure_depths[static_cast<std::size_t>(c)];
        if (dist[depth][c] < 0) continue;
        all.add("treasure" + std::to_string(c),
                {config.treasure_values[static_cast<std::size_t>(c)],
                 config.step_penalty * dist[depth][c]});
    }
    return pareto_prune(all);
}

/**
 * Time-expanded finite MOMDP for planning: state = (cell, step) plus one
 * absorbing terminal, so the gamma = 1 model is a DAG. Reaching a treasure
 * or the layer cap transitions to the terminal state. A cap of 25 layers
 * keeps every shortest treasure path (longest is 19 moves) while keeping
 * the model small; truncated no-treasure returns are Pareto-dominated and
 * vanish from the value sets.
 */
inline MomdpModel dst_to_momdp(const DeepSeaTreasureConfig& config = {}, int layer_cap = 25) {
    constexpr int R = DeepSeaTreasureConfig::rows;
    constexpr int C = DeepSeaTreasureConfig::cols;
    auto cell_id = [&](int r, int c) { return r * C + c; };
    const int num_states = R * C * layer_cap + 1;
    const int terminal = num_states - 1;

    std::vector<double> initial(static_cast<std::size_t>(num_states), 0.0);
    initial[static_cast<std::size_t>(cell_id(0, 0) * layer_cap)] = 1.0;

    MomdpModel model(num_states, 4, 2, 1.0, std::move(initial));
    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    for (int a = 0; a < 4; ++a) model.add_transition(terminal, a, terminal, 1.0, {0.0, 0.0});

    for (int r = 0; r < R; ++r) {
        for (int c = 0; c < C; ++c) {
            for (int t = 0; t < layer_cap; ++t) {
                const int state = cell_id(r, c) * layer_cap + t;
                if (state == terminal) continue;
                for (int a = 0; a < 4; ++a) {
                    if (!config.passable(r, c) || config.is_treasure(r, c)) {
                        // unreachable or episode-ending cell: wire to terminal
                        model.add_transition(state, a, terminal, 1.0, {0.0, 0.0});
                        continue;
                    }
                    int nr = r + dr[a], nc = c + dc[a];
                    if (!config.passable(nr, nc)) {
                        nr = r;
                        nc = c;
                    }
                    ValueVector reward = {0.0, config.step_penalty};
                    if (config.is_treasure(nr, nc))
                        reward[0] = config.treasure_values[static_cast<std::size_t>(nc)];
                    const bool ends = config.is_treasure(nr, nc) || t + 1 >= layer_cap;
                    const int next = ends ? terminal : cell_id(nr, nc) * layer_cap + (t + 1);
                    model.add_transition(state, a, next, 1.0, std::move(reward));
                }
            }
        }
    }
    model.validate();
    return model;
}

} // namespace morl
