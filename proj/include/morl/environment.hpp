#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "morl/rng.hpp"
#include "morl/types.hpp"
#include "morl/utility.hpp"

namespace morl {

struct DiscreteSpace {
    int n = 0;
};

struct BoxSpace {
    std::vector<double> low, high;
    std::size_t dimension() const { return low.size(); }
};

using SpaceDesc = std::variant<DiscreteSpace, BoxSpace>;

using Observation = std::vector<double>;

/// Discrete action index or a point in the action box.
using Action = std::variant<int, std::vector<double>>;

struct StepResult {
    Observation observation;
    ValueVector reward;
    bool terminal = false;
};

/**
 * Episodic simulator interface. Instances hold mutable episode state and are
 * single-threaded; parallel evaluation clones one instance per worker. All
 * stochasticity flows through the Rng argument, so trajectories are a pure
 * function of (environment config, policy, seed).
 */
class Environment {
public:
    virtual ~Environment() = default;

    virtual Observation reset(Rng& rng) = 0;

    /// Advances one step. Throws std::logic_error if called after the
    /// terminal flag was returned, and std::invalid_argument for actions
    /// outside the action space.
    virtual StepResult step(const Action& action, Rng& rng) = 0;

    virtual int num_objectives() const = 0;
    virtual int horizon() const = 0;
    virtual SpaceDesc action_space() const = 0;
    virtual SpaceDesc observation_space() const = 0;
    virtual std::unique_ptr<Environment> clone() const = 0;

    virtual std::string name() const = 0;
    virtual std::vector<std::string> objective_names() const {
        std::vector<std::string> names;
        for (int i = 0; i < num_objectives(); ++i) names.push_back("v" + std::to_string(i));
        return names;
    }
};

/// A (possibly stochastic) mapping from observations to actions.
class Policy {
public:
    virtual ~Policy() = default;
    virtual Action act(const Observation& obs, Rng& rng) const = 0;
};

class FunctionPolicy : public Policy {
public:
    explicit FunctionPolicy(std::function<Action(const Observation&)> fn) : fn_(std::move(fn)) {}
    Action act(const Observation& obs, Rng&) const override { return fn_(obs); }

private:
    std::function<Action(const Observation&)> fn_;
};

/// Discounted component-wise return of one recorded episode.
struct EpisodeReturn {
    ValueVector components;
    int steps = 0;
};

/// Runs one episode and accumulates sum_k gamma^k r_{k+1}.
inline EpisodeReturn rollout(Environment& env, const Policy& policy, double gamma, Rng& rng) {
    EpisodeReturn ret;
    ret.components.assign(static_cast<std::size_t>(env.num_objectives()), 0.0);
    Observation obs = env.reset(rng);
    double discount = 1.0;
    for (int k = 0; k < env.horizon(); ++k) {
        StepResult sr = env.step(policy.act(obs, rng), rng);
        for (std::size_t i = 0; i < ret.components.size(); ++i)
            ret.components[i] += discount * sr.reward[i];
        ++ret.steps;
        if (sr.terminal) break;
        obs = std::move(sr.observation);
        discount *= gamma;
    }
    return ret;
}

/// n_episodes rollouts on deterministically forked streams: episode i uses
/// rng.stream(i), so serial and parallel evaluation agree bit-for-bit.
inline std::vector<EpisodeReturn> collect_returns(Environment& env, const Policy& policy,
                                                  double gamma, int n_episodes, const Rng& rng) {
    if (n_episodes < 1) throw std::invalid_argument("collect_returns: n_episodes must be >= 1");
    std::vector<EpisodeReturn> batch;
    batch.reserve(static_cast<std::size_t>(n_episodes));
    for (int i = 0; i < n_episodes; ++i) {
        Rng episode_rng = rng.stream(static_cast<std::uint64_t>(i));
        batch.push_back(rollout(env, policy, gamma, episode_rng));
    }
    return batch;
}

inline ValueVector mean_return(const std::vector<EpisodeReturn>& batch) {
    std::vector<ValueVector> vs;
    vs.reserve(batch.size());
    for (const auto& r : batch) vs.push_back(r.components);
    return compensated_mean(vs);
}

/// Component-wise arithmetic mean over n_episodes rollouts (Monte Carlo
/// estimate of the expected return vector).
inline ValueVector estimate_mean_return(Environment& env, const Policy& policy, double gamma,
                                        int n_episodes, const Rng& rng) {
    return mean_return(collect_returns(env, policy, gamma, n_episodes, rng));
}

/// Utility of the mean return of a pre-collected batch.
inline double ser_of_batch(const std::vector<EpisodeReturn>& batch, const UtilityFunction& u) {
    return u(mean_return(batch));
}

/// Mean of per-episode utilities of a pre-collected batch.
inline double esr_of_batch(const std::vector<EpisodeReturn>& batch, const UtilityFunction& u) {
    CompensatedSum acc;
    for (const auto& r : batch) acc.add(u(r.components));
    return acc.value() / static_cast<double>(batch.size());
}

/// Scalarised expected returns: u applied to the Monte Carlo mean return.
/// ser_value and esr_value called with the same rng seed share the exact
/// same batch of rollouts.
inline double ser_value(Environment& env, const Policy& policy, const UtilityFunction& u,
                        double gamma, int n_episodes, const Rng& rng) {
    return ser_of_batch(collect_returns(env, policy, gamma, n_episodes, rng), u);
}

/// Expected scalarised returns: u applied per episode before averaging.
/// Monte Carlo is the only evaluator here; the utility does not distribute
/// over the Bellman recursion, so no dynamic-programming route exists.
inline double esr_value(Environment& env, const Policy& policy, const UtilityFunction& u,
                        double gamma, int n_episodes, const Rng& rng) {
    return esr_of_batch(collect_returns(env, policy, gamma, n_episodes, rng), u);
}

} // namespace morl
