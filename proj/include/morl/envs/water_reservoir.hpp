#pragma once

#include <json.hpp>

#include "morl/environment.hpp"

namespace morl {

/**
 * Water-reservoir control: one continuous state (stored volume), one
 * continuous action (requested release). Objectives are flooding exposure
 * and water-demand deficit, both penalties (<= 0). Mean inflow is below
 * demand, so meeting demand requires holding water, which raises flooding
 * risk: the objectives genuinely conflict.
 */
struct WaterReservoirConfig {
    double capacity = 100.0;        // C
    double flood_threshold = 50.0;  // F
    double demand = 10.0;           // D, per step
    double inflow_mean = 8.0;
    double inflow_std = 2.0;
    double initial_low = 20.0;
    double initial_high = 80.0;
    int horizon = 100;

    nlohmann::json to_json() const {
        return {{"name", "water_reservoir"},
                {"capacity", capacity},
                {"flood_threshold", flood_threshold},
                {"demand", demand},
                {"inflow_mean", inflow_mean},
                {"inflow_std", inflow_std},
                {"initial_low", initial_low},
                {"initial_high", initial_high},
                {"horizon", horizon}};
    }

    static WaterReservoirConfig from_json(const nlohmann::json& j) {
        WaterReservoirConfig c;
        c.capacity = j.value("capacity", c.capacity);
        c.flood_threshold = j.value("flood_threshold", c.flood_threshold);
        c.demand = j.value("demand", c.demand);
        c.inflow_mean = j.value("inflow_mean", c.inflow_mean);
        c.inflow_std = j.value("inflow_std", c.inflow_std);
        c.initial_low = j.value("initial_low", c.initial_low);
        c.initial_high = j.value("initial_high", c.initial_high);
        c.horizon = j.value("horizon", c.horizon);
        return c;
    }
};

struct ReservoirTransition {
    double next_storage;
    double actual_release;
    double overflow;
    ValueVector reward; // (flooding, water-demand)
};

/// One step of the reservoir dynamics with a known inflow. Releases are
/// clamped to the available storage; water above capacity is force-released
/// and counted as flooding exposure on top of the above-threshold penalty.
inline ReservoirTransition reservoir_transition(double storage, double requested_release,
                                                double inflow, const WaterReservoirConfig& config) {
    if (!(storage >= 0.0 && storage <= config.capacity))
        throw std::invalid_argument("reservoir_transition: storage out of [0, capacity]");
    ReservoirTransition tr;
    tr.actual_release = std::clamp(requested_release, 0.0, storage);
    const double after_release = storage - tr.actual_release;
    tr.overflow = std::max(0.0, after_release + inflow - config.capacity);
    tr.next_storage = std::min(after_release + inflow, config.capacity);
    const double flood = -std::max(tr.next_storage - config.flood_threshold, 0.0) - tr.overflow;
    const double deficit = -std::max(config.demand - tr.actual_release, 0.0);
    tr.reward = {flood, deficit};
    return tr;
}

class WaterReservoirEnv : public Environment {
public:
    explicit WaterReservoirEnv(WaterReservoirConfig config = {}) : config_(config) {}

    Observation reset(Rng& rng) override {
        storage_ = rng.uniform(config_.initial_low, config_.initial_high);
        steps_ = 0;
        done_ = false;
        in_episode_ = true;
        return observation();
    }

    StepResult step(const Action& action, Rng& rng) override {
        if (!in_episode_) throw std::logic_error("WaterReservoirEnv: step before reset");
        if (done_) throw std::logic_error("WaterReservoirEnv: step after terminal");
        const auto* a = std::get_if<std::vector<double>>(&action);
        if (a == nullptr || a->size() != 1)
            throw std::invalid_argument("WaterReservoirEnv: action must be a 1-d release amount");
        const double requested = (*a)[0];
        if (!(requested >= 0.0 && requested <= config_.capacity))
            throw std::invalid_argument("WaterReservoirEnv: release out of [0, capacity]");

        const double inflow = std::max(0.0, rng.normal(config_.inflow_mean, config_.inflow_std));
        const ReservoirTransition tr = reservoir_transition(storage_, requested, inflow, config_);
        storage_ = tr.next_storage;
        ++steps_;
        done_ = steps_ >= config_.horizon;

        StepResult out;
        out.reward = tr.reward;
        out.terminal = done_;
        out.observation = observation();
        return out;
    }

    int num_objectives() const override { return 2; }
    int horizon() const override { return config_.horizon; }
    SpaceDesc action_space() const override { return BoxSpace{{0.0}, {config_.capacity}}; }
    SpaceDesc observation_space() const override { return BoxSpace{{0.0}, {1.0}}; }
    std::unique_ptr<Environment> clone() const override {
        return std::make_unique<WaterReservoirEnv>(config_);
    }
    std::string name() const override { return "water_reservoir"; }
    std::vector<std::string> objective_names() const override { return {"flooding", "water-demand"}; }

    const WaterReservoirConfig& config() const { return config_; }
    double storage() const { return storage_; }

private:
    Observation observation() const { return {storage_ / config_.capacity}; }

    WaterReservoirConfig config_;
    double storage_ = 0.0;
    int steps_ = 0;
    bool done_ = false, in_episode_ = false;
};

} // namespace morl
