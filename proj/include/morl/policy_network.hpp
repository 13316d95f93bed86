#pragma once

#include <cmath>

#include "morl/environment.hpp"

namespace morl {

/**
 * Small feedforward policy: input -> 50 tanh units -> output, with the
 * output squashed onto the action space (affine map into the box for
 * continuous actions, argmax over logits for discrete ones). The forward
 * pass is deterministic; all exploration lives in the parameter
 * distribution that samples networks.
 *
 * Parameter layout: W1 (hidden x in), b1 (hidden), W2 (out x hidden),
 * b2 (out); total (in + 1) * 50 + 51 * out.
 */
class PolicyNetwork : public Policy {
public:
    static constexpr int hidden_units = 50;

    PolicyNetwork(int input_dim, SpaceDesc action_space)
        : input_dim_(input_dim), action_space_(std::move(action_space)),
          output_dim_(std::holds_alternative<DiscreteSpace>(action_space_)
                          ? std::get<DiscreteSpace>(action_space_).n
                          : static_cast<int>(std::get<BoxSpace>(action_space_).dimension())),
          params_(static_cast<std::size_t>(parameter_count(input_dim_, output_dim_)), 0.0) {}

    static int parameter_count(int input_dim, int output_dim) {
        return (input_dim + 1) * hidden_units + (hidden_units + 1) * output_dim;
    }

    int parameter_count() const { return static_cast<int>(params_.size()); }
    int input_dim() const { return input_dim_; }
    int output_dim() const { return output_dim_; }

    const std::vector<double>& parameters() const { return params_; }
    void set_parameters(std::vector<double> params) {
        if (params.size() != params_.size())
            throw std::invalid_argument("PolicyNetwork: wrong parameter count");
        params_ = std::move(params);
    }

    std::vector<double> forward(const Observation& obs) const {
        if (static_cast<int>(obs.size()) != input_dim_)
            throw std::invalid_argument("PolicyNetwork: observation dimension mismatch");
        const double* w1 = params_.data();
        const double* b1 = w1 + static_cast<std::size_t>(hidden_units) * input_dim_;
        const double* w2 = b1 + hidden_units;
        const double* b2 = w2 + static_cast<std::size_t>(output_dim_) * hidden_units;

        double hidden[hidden_units];
        for (int h = 0; h < hidden_units; ++h) {
            double z = b1[h];
            for (int i = 0; i < input_dim_; ++i) z += w1[h * input_dim_ + i] * obs[static_cast<std::size_t>(i)];
            hidden[h] = std::tanh(z);
        }
        std::vector<double> out(static_cast<std::size_t>(output_dim_));
        for (int o = 0; o < output_dim_; ++o) {
            double z = b2[o];
            for (int h = 0; h < hidden_units; ++h) z += w2[o * hidden_units + h] * hidden[h];
            out[static_cast<std::size_t>(o)] = z;
        }
        return out;
    }

    Action act(const Observation& obs, Rng&) const override {
        std::vector<double> z = forward(obs);
        if (const auto* box = std::get_if<BoxSpace>(&action_space_)) {
            std::vector<double> a(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double squashed = std::tanh(z[i]); // [-1, 1]
                a[i] = box->low[i] + (squashed + 1.0) * 0.5 * (box->high[i] - box->low[i]);
            }
            return a;
        }
        int best = 0;
        for (std::size_t i = 1; i < z.size(); ++i)
            if (z[i] > z[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
        return best;
    }

private:
    int input_dim_;
    SpaceDesc action_space_;
    int output_dim_;
    std::vector<double> params_;
};

} // namespace morl
