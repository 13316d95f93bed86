#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "morl/types.hpp"

namespace morl {

/**
 * Finite tabular MOMDP <S, A, T, gamma, mu, R> with a d-component reward
 * vector on each transition. Transitions are stored sparsely per (s, a).
 * Validation enforces: every transition row sums to 1 within 1e-9, the
 * initial distribution sums to 1 within 1e-9, and all reward vectors have
 * exactly d components.
 */
class MomdpModel {
public:
    struct Successor {
        int next_state;
        double probability;
        ValueVector reward;
    };

    MomdpModel(int num_states, int num_actions, int num_objectives, double gamma,
               std::vector<double> initial_dist)
        : num_states_(num_states), num_actions_(num_actions), num_objectives_(num_objectives),
          gamma_(gamma), initial_(std::move(initial_dist)),
          table_(static_cast<std::size_t>(num_states),
                 std::vector<std::vector<Successor>>(static_cast<std::size_t>(num_actions))) {
        if (num_states_ < 1 || num_actions_ < 1)
            throw std::invalid_argument("MomdpModel: num_states and num_actions must be positive");
        if (num_objectives_ < 2)
            throw std::invalid_argument("MomdpModel: num_objectives must be >= 2");
        if (!(gamma_ >= 0.0 && gamma_ <= 1.0))
            throw std::invalid_argument("MomdpModel: gamma must be in [0, 1]");
        if (static_cast<int>(initial_.size()) != num_states_)
            throw std::invalid_argument("MomdpModel: initial distribution size mismatch");
    }

    void add_transition(int s, int a, int next, double p, ValueVector reward) {
        check_state(s);
        check_state(next);
        check_action(a);
        if (static_cast<int>(reward.size()) != num_objectives_)
            throw std::invalid_argument("MomdpModel: reward must have exactly " +
                                        std::to_string(num_objectives_) + " components");
        if (!(p >= 0.0))
            throw std::invalid_argument("MomdpModel: negative transition probability");
        table_[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)].push_back(
            {next, p, std::move(reward)});
    }

    /// Checks the distribution invariants; throws on violation.
    void validate() const {
        double isum = 0.0;
        for (double p : initial_) {
            if (!(p >= 0.0)) throw std::invalid_argument("MomdpModel: negative initial probability");
            isum += p;
        }
        if (std::abs(isum - 1.0) > 1e-9)
            throw std::invalid_argument("MomdpModel: initial distribution sums to " + std::to_string(isum));
        for (int s = 0; s < num_states_; ++s) {
            for (int a = 0; a < num_actions_; ++a) {
                double rsum = 0.0;
                for (const auto& tr : successors(s, a)) rsum += tr.probability;
                if (std::abs(rsum - 1.0) > 1e-9)
                    throw std::invalid_argument("MomdpModel: transition row (s=" + std::to_string(s) +
                                                ", a=" + std::to_string(a) + ") sums to " +
                                                std::to_string(rsum));
            }
        }
    }

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    int num_objectives() const { return num_objectives_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& initial_dist() const { return initial_; }

    const std::vector<Successor>& successors(int s, int a) const {
        check_state(s);
        check_action(a);
        return table_[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
    }

    /// Most likely initial state (the root for per-state solution reports).
    int initial_state() const {
        return static_cast<int>(std::max_element(initial_.begin(), initial_.end()) - initial_.begin());
    }

    /// True if all actions self-loop with probability 1 and zero reward.
    bool is_absorbing_zero(int s) const {
        for (int a = 0; a < num_actions_; ++a) {
            const auto& row = successors(s, a);
            if (row.size() != 1) return false;
            const auto& tr = row.front();
            if (tr.next_state != s || tr.probability != 1.0) return false;
            for (double r : tr.reward)
                if (r != 0.0) return false;
        }
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["num_states"] = num_states_;
        j["num_actions"] = num_actions_;
        j["num_objectives"] = num_objectives_;
        j["gamma"] = gamma_;
        j["initial"] = initial_;
        nlohmann::json transitions = nlohmann::json::array();
        nlohmann::json rewards = nlohmann::json::array();
        for (int s = 0; s < num_states_; ++s) {
            for (int a = 0; a < num_actions_; ++a) {
                auto row = successors(s, a);
                std::sort(row.begin(), row.end(),
                          [](const Successor& x, const Successor& y) { return x.next_state < y.next_state; });
                for (const auto& tr : row) {
                    transitions.push_back({s, a, tr.next_state, tr.probability});
                    rewards.push_back({s, a, tr.next_state, tr.reward});
                }
            }
        }
        j["transitions"] = std::move(transitions);
        j["rewards"] = std::move(rewards);
        return j;
    }

    static MomdpModel from_json(const nlohmann::json& j) {
        MomdpModel m(j.at("num_states").get<int>(), j.at("num_actions").get<int>(),
                     j.at("num_objectives").get<int>(), j.at("gamma").get<double>(),
                     j.at("initial").get<std::vector<double>>());
        std::map<std::tuple<int, int, int>, ValueVector> reward_of;
        for (const auto& r : j.at("rewards")) {
            reward_of[{r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>()}] =
                r.at(3).get<ValueVector>();
        }
        for (const auto& t : j.at("transitions")) {
            const int s = t.at(0).get<int>(), a = t.at(1).get<int>(), next = t.at(2).get<int>();
            auto it = reward_of.find({s, a, next});
            if (it == reward_of.end())
                throw std::invalid_argument("MomdpModel: transition (" + std::to_string(s) + "," +
                                            std::to_string(a) + "," + std::to_string(next) +
                                            ") has no reward entry");
            m.add_transition(s, a, next, t.at(3).get<double>(), it->second);
        }
        m.validate();
        return m;
    }

    static MomdpModel load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("MomdpModel: cannot open " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }

private:
    void check_state(int s) const {
        if (s < 0 || s >= num_states_)
            throw std::invalid_argument("MomdpModel: state index out of range");
    }
    void check_action(int a) const {
        if (a < 0 || a >= num_actions_)
            throw std::invalid_argument("MomdpModel: action index out of range");
    }

    int num_states_, num_actions_, num_objectives_;
    double gamma_;
    std::vector<double> initial_;
    std::vector<std::vector<std::vector<Successor>>> table_;
};

} // namespace morl
