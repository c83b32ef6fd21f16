#include "flowfis/bp/rprop.hpp"

#include <cmath>
#include <stdexcept>

namespace flowfis::bp {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void update_span(std::span<double> weights, std::span<const double> grads,
                 std::span<double> steps, std::span<double> prev_signs,
                 const TrainConfig& cfg) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double g = grads[i];
        const double s = sign(g);
        const double agreement = s * prev_signs[i];
        if (agreement > 0.0) {
            steps[i] = std::min(steps[i] * cfg.eta_plus, cfg.delta_max);
            prev_signs[i] = s;
        } else if (agreement < 0.0) {
            steps[i] = std::max(steps[i] * cfg.eta_minus, cfg.delta_min);
            prev_signs[i] = 0.0;  // treat the next epoch as a fresh start
        } else {
            prev_signs[i] = s;
        }
        weights[i] -= s * steps[i];
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (epochs <= 0) {
        throw std::invalid_argument("epochs must be positive");
    }
    if (!(eta_minus > 0.0 && eta_minus < 1.0 && eta_plus > 1.0)) {
        throw std::invalid_argument("rprop factors require 0 < eta- < 1 < eta+");
    }
    if (!(delta_min < delta0 && delta0 < delta_max)) {
        throw std::invalid_argument("rprop steps require delta_min < delta0 < delta_max");
    }
    if (hidden1 < 1 || hidden2 < 1) {
        throw std::invalid_argument("hidden layer sizes must be >= 1");
    }
}

void rprop_step(TrainState& state, const NetworkParams& grads, NetworkParams& params,
                const TrainConfig& config) {
    for (int l = 0; l < 3; ++l) {
        update_span(params.weights[l].a, grads.weights[l].a, state.step.weights[l].a,
                    state.prev_sign.weights[l].a, config);
        update_span(params.biases[l], grads.biases[l], state.step.biases[l],
                    state.prev_sign.biases[l], config);
    }
    ++state.epoch;
}

TrainedModel train(const TrainConfig& config, std::span<const data::ExperimentRecord> records) {
    config.validate();
    if (records.size() < 2) {
        throw std::invalid_argument("training needs at least 2 records");
    }

    std::vector<std::array<double, 3>> features;
    features.reserve(records.size());
    for (const auto& rec : records) {
        features.push_back({rec.angle_deg, rec.flow_m3d, rec.watercut});
    }
    TrainedModel model;
    model.config = config;
    model.normalizer = Normalizer::fit(features);

    std::vector<Sample> batch(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        batch[i].x = model.normalizer.normalize(features[i]);
        batch[i].target = static_cast<double>(kb::code(records[i].pattern));
    }

    model.params = init_network(config.seed, config.hidden1, config.hidden2);
    TrainState state;
    state.step = zeros_like(model.params);
    state.prev_sign = zeros_like(model.params);
    for (int l = 0; l < 3; ++l) {
        state.step.weights[l].a.assign(state.step.weights[l].a.size(), config.delta0);
        state.step.biases[l].assign(state.step.biases[l].size(), config.delta0);
    }

    model.history.initial_mse = batch_mse(model.params, batch);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const NetworkParams grads = gradients(model.params, batch);
        rprop_step(state, grads, model.params, config);
        const double epoch_mse = batch_mse(model.params, batch);
        model.history.mse.push_back(epoch_mse);
        // a non-finite goal disables early stopping
        if (std::isfinite(config.goal_mse) && epoch_mse <= config.goal_mse) {
            model.history.reached_goal = true;
            break;
        }
    }
    return model;
}

kb::FlowPattern predict_class(const NetworkParams& params, const Normalizer& normalizer,
                              const kb::OperatingPoint& point) {
    const std::array<double, 3> x =
        normalizer.normalize({point.angle_deg, point.flow_m3d, point.watercut});
    return nearest_pattern(forward(params, x));
}

}  // namespace flowfis::bp
