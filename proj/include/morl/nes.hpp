#pragma once

#include <atomic>
#include <cstdio>
#include <future>
#include <numeric>
#include <thread>

#include "morl/environment.hpp"
#include "morl/indicators.hpp"
#include "morl/policy_network.hpp"
#include "morl/solution_set.hpp"

namespace morl {

// ---------------------------------------------------------------------------
// Population scoring: non-dominance ranking and crowding distance
// ---------------------------------------------------------------------------

/// Peeling ranks: 0 for the non-dominated points, then -1 for the points
/// that become non-dominated once those are removed, and so on.
inline std::vector<int> nondominated_rank(const std::vector<ValueVector>& points) {
    if (points.empty()) throw std::invalid_argument("nondominated_rank: empty input");
    std::vector<int> ranks(points.size(), 0);
    std::vector<bool> assigned(points.size(), false);
    int current = 0;
    std::size_t remaining = points.size();
    while (remaining > 0) {
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (assigned[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < points.size() && !dominated; ++j)
                dominated = !assigned[j] && j != i && pareto_dominates(points[j], points[i]);
            if (!dominated) layer.push_back(i);
        }
        for (std::size_t i : layer) {
            ranks[i] = current;
            assigned[i] = true;
        }
        remaining -= layer.size();
        --current;
    }
    return ranks;
}

/**
 * Normalised crowding distance within one rank class, in [0, 1].
 *
 * Per objective: points holding the extreme value get 1; an interior point
 * gets half the span between its sorted neighbours, divided by the
 * objective's range; a degenerate range contributes 0. The per-point
 * distance is the mean over objectives. Full-vector duplicates get 0.
 */
inline std::vector<double> crowding_distance(const std::vector<ValueVector>& points) {
    if (points.empty()) throw std::invalid_argument("crowding_distance: empty input");
    const std::size_t n = points.size();
    const std::size_t d = points.front().size();
    std::vector<double> crowd(n, 0.0);

    std::vector<bool> duplicate(n, false);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && points[i] == points[j]) duplicate[i] = true;

    if (n == 1) return {1.0};

    for (std::size_t j = 0; j < d; ++j) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return points[a][j] < points[b][j]; });
        const double lo = points[order.front()][j];
        const double hi = points[order.back()][j];
        const double range = hi - lo;
        if (range == 0.0) continue; // degenerate objective contributes 0
        for (std::size_t pos = 0; pos < n; ++pos) {
            const std::size_t i = order[pos];
            const double v = points[i][j];
            if (v == lo || v == hi) {
                crowd[i] += 1.0;
            } else {
                const double left = points[order[pos - 1]][j];
                const double right = points[order[pos + 1]][j];
                crowd[i] += (right - left) / (2.0 * range);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        crowd[i] = duplicate[i] ? 0.0 : crowd[i] / static_cast<double>(d);
    return crowd;
}

/// The MONES fitness indicator: peeling rank plus crowding distance, with
/// crowding computed within each rank class. Dominance-consistent because
/// crowding is bounded by 1 while ranks differ by at least 1.
inline std::vector<double> mones_indicator(const std::vector<ValueVector>& points) {
    const std::vector<int> ranks = nondominated_rank(points);
    std::vector<double> indicator(points.size(), 0.0);
    const int lowest = *std::min_element(ranks.begin(), ranks.end());
    for (int r = 0; r >= lowest; --r) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (ranks[i] == r) members.push_back(i);
        if (members.empty()) continue;
        std::vector<ValueVector> class_points;
        class_points.reserve(members.size());
        for (std::size_t i : members) class_points.push_back(points[i]);
        const std::vector<double> crowd = crowding_distance(class_points);
        for (std::size_t k = 0; k < members.size(); ++k)
            indicator[members[k]] = static_cast<double>(r) + crowd[k];
    }
    return indicator;
}

// ---------------------------------------------------------------------------
// Separable natural evolution strategy core
// ---------------------------------------------------------------------------

/// Per-parameter independent Gaussians over policy-network weights.
struct SearchDistribution {
    std::vector<double> means;
    std::vector<double> log_stds;

    static SearchDistribution init(std::size_t parameter_count, double init_std) {
        if (!(init_std > 0.0)) throw std::invalid_argument("SearchDistribution: init_std must be > 0");
        return {std::vector<double>(parameter_count, 0.0),
                std::vector<double>(parameter_count, std::log(init_std))};
    }

    std::size_t size() const { return means.size(); }
    double std_dev(std::size_t j) const { return std::exp(log_stds[j]); }
};

struct MonesConfig {
    int iterations = 30;
    int population = 50;
    int evals_per_policy = 10;
    double lr_mean = 0.1;
    double lr_log_std = 0.05;
    double init_std = 0.5;
    double gamma = 1.0;

    void validate() const {
        if (iterations < 0) throw std::invalid_argument("MonesConfig: iterations must be >= 0");
        if (population < 1 || evals_per_policy < 1)
            throw std::invalid_argument("MonesConfig: population and evals_per_policy must be >= 1");
        if (!(init_std > 0.0)) throw std::invalid_argument("MonesConfig: init_std must be > 0");
    }
};

/// Centered uniform rank utilities in [-1/2, 1/2]; ties share their average
/// rank, so identical fitnesses produce a zero update.
inline std::vector<double> centered_rank_utilities(const std::vector<double>& fitness) {
    const std::size_t n = fitness.size();
    std::vector<double> u(n, 0.0);
    if (n < 2) return u;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t end = pos;
        while (end + 1 < n && fitness[order[end + 1]] == fitness[order[pos]]) ++end;
        const double avg = 0.5 * static_cast<double>(pos + end); // average position of the tie group
        for (std::size_t k = pos; k <= end; ++k) rank[order[k]] = avg;
        pos = end + 1;
    }
    for (std::size_t i = 0; i < n; ++i)
        u[i] = rank[i] / static_cast<double>(n - 1) - 0.5;
    return u;
}

/**
 * One separable-NES natural-gradient step. With independent Gaussians the
 * natural gradient has the closed form
 *   delta mean_j    = lr_mean    * sigma_j * mean_k(u_k * eps_kj)
 *   delta log_std_j = lr_log_std * mean_k(u_k * (eps_kj^2 - 1)) / 2
 * where eps are the standard-normal perturbations that generated the
 * population and u are the rank-shaped fitnesses.
 */
inline void natural_gradient_step(SearchDistribution& dist,
                                  const std::vector<std::vector<double>>& noises,
                                  const std::vector<double>& fitness, double lr_mean,
                                  double lr_log_std) {
    if (noises.size() != fitness.size())
        throw std::invalid_argument("natural_gradient_step: population size mismatch");
    const std::vector<double> u = centered_rank_utilities(fitness);
    const double n = static_cast<double>(noises.size());
    for (std::size_t j = 0; j < dist.size(); ++j) {
        double g_mean = 0.0, g_log_std = 0.0;
        for (std::size_t k = 0; k < noises.size(); ++k) {
            g_mean += u[k] * noises[k][j];
            g_log_std += u[k] * (noises[k][j] * noises[k][j] - 1.0);
        }
        g_mean /= n;
        g_log_std /= n;
        dist.means[j] += lr_mean * dist.std_dev(j) * g_mean;
        dist.log_stds[j] += lr_log_std * g_log_std / 2.0;
    }
}

// ---------------------------------------------------------------------------
// Training loops
// ---------------------------------------------------------------------------

namespace detail {

inline int observation_dim(const Environment& env) {
    const SpaceDesc space = env.observation_space();
    if (const auto* box = std::get_if<BoxSpace>(&space)) return static_cast<int>(box->dimension());
    return 1; // discrete observations arrive as a single index
}

/// Runs fn(k) for k in [0, n) across workers; results land by index, and
/// every k draws only from its own Rng streams, so the thread count never
/// changes the outcome.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<std::size_t>(workers));
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1)) fn(k);
        }));
    }
    for (auto& f : futures) f.get();
}

struct EvaluatedPopulation {
    std::vector<std::vector<double>> noises;       // population x parameters
    std::vector<ValueVector> mean_returns;         // population
};

/// Samples the population from `dist` and evaluates each member's mean
/// return over evals_per_policy rollouts. Member k of iteration stream
/// `iter_rng` uses iter_rng.stream(k) for both its perturbation and its
/// evaluation episodes.
inline EvaluatedPopulation evaluate_population(const Environment& env_proto,
                                               const SearchDistribution& dist,
                                               const MonesConfig& config, const Rng& iter_rng,
                                               int iteration) {
    EvaluatedPopulation out;
    out.noises.assign(static_cast<std::size_t>(config.population), {});
    out.mean_returns.assign(static_cast<std::size_t>(config.population), {});
    std::vector<std::string> failures(static_cast<std::size_t>(config.population));

    parallel_for(config.population, [&](int k) {
        Rng member_rng = iter_rng.stream(static_cast<std::uint64_t>(k));
        std::vector<double> noise(dist.size());
        std::vector<double> params(dist.size());
        for (std::size_t j = 0; j < dist.size(); ++j) {
            noise[j] = member_rng.normal();
            params[j] = dist.means[j] + dist.std_dev(j) * noise[j];
        }
        std::unique_ptr<Environment> env = env_proto.clone();
        PolicyNetwork policy(observation_dim(*env), env->action_space());
        policy.set_parameters(std::move(params));
        ValueVector ret = estimate_mean_return(*env, policy, config.gamma,
                                               config.evals_per_policy, member_rng);
        if (!all_finite(ret))
            failures[static_cast<std::size_t>(k)] =
                "non-finite mean return for member " + std::to_string(k) + " at iteration " +
                std::to_string(iteration);
        out.noises[static_cast<std::size_t>(k)] = std::move(noise);
        out.mean_returns[static_cast<std::size_t>(k)] = std::move(ret);
    });

    for (const auto& f : failures)
        if (!f.empty()) throw std::runtime_error("population evaluation aborted: " + f);
    return out;
}

inline SolutionSet archive_entry(const std::vector<ValueVector>& returns, int iteration) {
    SolutionSet set;
    char id[32];
    for (std::size_t k = 0; k < returns.size(); ++k) {
        std::snprintf(id, sizeof(id), "i%02d_p%02zu", iteration, k);
        set.add(id, returns[k]);
    }
    return set;
}

} // namespace detail

struct MonesResult {
    SearchDistribution distribution;
    std::vector<SolutionSet> archive; // one raw set of mean returns per iteration
};

/**
 * Multi-objective NES: sample a population of policies, score their mean
 * returns with the non-dominance-rank + crowding indicator, and follow the
 * natural gradient of that indicator. The archive records every member's
 * mean return per iteration.
 */
inline MonesResult mones_train(const Environment& env_proto, const MonesConfig& config,
                               const Rng& rng) {
    config.validate();
    const int param_count = PolicyNetwork::parameter_count(detail::observation_dim(env_proto),
                                                           std::holds_alternative<DiscreteSpace>(env_proto.action_space())
                                                               ? std::get<DiscreteSpace>(env_proto.action_space()).n
                                                               : static_cast<int>(std::get<BoxSpace>(env_proto.action_space()).dimension()));
    MonesResult result;
    result.distribution = SearchDistribution::init(static_cast<std::size_t>(param_count), config.init_std);
    for (int t = 0; t < config.iterations; ++t) {
        detail::EvaluatedPopulation pop =
            detail::evaluate_population(env_proto, result.distribution, config, rng.stream(static_cast<std::uint64_t>(t)), t);
        const std::vector<double> fitness = mones_indicator(pop.mean_returns);
        for (double f : fitness)
            if (!std::isfinite(f))
                throw std::runtime_error("mones_train: non-finite fitness at iteration " + std::to_string(t));
        natural_gradient_step(result.distribution, pop.noises, fitness, config.lr_mean,
                              config.lr_log_std);
        result.archive.push_back(detail::archive_entry(pop.mean_returns, t));
    }
    return result;
}

struct NesIterationStats {
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
};

struct NesResult {
    PolicyNetwork policy; // the mean policy after the last iteration
    SearchDistribution distribution;
    std::vector<NesIterationStats> history;
    ValueVector final_mean_return; // mean policy, evals_per_policy rollouts
};

/// Single-objective NES with the same loop as MONES but fitness
/// u(mean return) per policy.
inline NesResult nes_train(const Environment& env_proto, const UtilityFunction& u,
                           const MonesConfig& config, const Rng& rng) {
    config.validate();
    const int obs_dim = detail::observation_dim(env_proto);
    PolicyNetwork policy(obs_dim, env_proto.action_space());
    SearchDistribution dist =
        SearchDistribution::init(static_cast<std::size_t>(policy.parameter_count()), config.init_std);

    std::vector<NesIterationStats> history;
    for (int t = 0; t < config.iterations; ++t) {
        detail::EvaluatedPopulation pop =
            detail::evaluate_population(env_proto, dist, config, rng.stream(static_cast<std::uint64_t>(t)), t);
        std::vector<double> fitness(pop.mean_returns.size());
        for (std::size_t k = 0; k < pop.mean_returns.size(); ++k)
            fitness[k] = u(pop.mean_returns[k]);
        NesIterationStats stats;
        stats.best_fitness = *std::max_element(fitness.begin(), fitness.end());
        CompensatedSum acc;
        for (double f : fitness) acc.add(f);
        stats.mean_fitness = acc.value() / static_cast<double>(fitness.size());
        history.push_back(stats);
        natural_gradient_step(dist, pop.noises, fitness, config.lr_mean, config.lr_log_std);
    }

    policy.set_parameters(dist.means);
    std::unique_ptr<Environment> env = env_proto.clone();
    ValueVector final_ret = estimate_mean_return(
        *env, policy, config.gamma, config.evals_per_policy,
        rng.stream(static_cast<std::uint64_t>(config.iterations))); // one past the iteration streams
    return NesResult{std::move(policy), std::move(dist), std::move(history), std::move(final_ret)};
}

/**
 * Outer-loop method: one NES run per utility sampled from the prior,
 * returning the raw set of final-policy mean returns (pruning is the
 * caller's choice). Run i derives everything from rng.stream(i), so the
 * result multiset does not depend on execution order.
 */
inline SolutionSet outer_loop_nes(const Environment& env_proto, const UtilityPrior& prior,
                                  const MonesConfig& config, const Rng& rng) {
    const std::vector<UtilityFunction> utilities =
        sample_utilities(prior, static_cast<std::size_t>(env_proto.num_objectives()));
    SolutionSet out;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
        try {
            NesResult res = nes_train(env_proto, utilities[i], config, rng.stream(i));
            char id[16];
            std::snprintf(id, sizeof(id), "run%02zu", i);
            out.add(id, std::move(res.final_mean_return));
        } catch (const std::exception& e) {
            throw std::runtime_error("outer_loop_nes: run " + std::to_string(i) + " failed: " + e.what());
        }
    }
    return out;
}

} // namespace morl
