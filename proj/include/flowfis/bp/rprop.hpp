#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "flowfis/bp/network.hpp"
#include "flowfis/data/dataset.hpp"
#include "flowfis/kb/knowledge_base.hpp"

namespace flowfis::bp {

struct TrainConfig {
    int epochs = 300;
    double goal_mse = 1e-5;
    double delta0 = 0.05;  // initial per-weight step
    double eta_plus = 1.2;
    double eta_minus = 0.5;
    double delta_max = 50.0;
    double delta_min = 1e-6;
    std::uint64_t seed = 1;
    int hidden1 = 8;
    int hidden2 = 6;

    /// Throws std::invalid_argument when a bound is violated.
    void validate() const;

    bool operator==(const TrainConfig&) const = default;
};

/// Per-weight resilient-backpropagation state: adaptive step sizes and the
/// sign of the previous gradient (0 after a sign flip or at the start).
struct TrainState {
    NetworkParams step;       // every entry in [delta_min, delta_max]
    NetworkParams prev_sign;  // -1, 0, or +1 stored as double
    int epoch = 0;
};

/// One full-batch resilient update. Per weight: if the gradient keeps its
/// sign the step grows by eta_plus (capped at delta_max); on a sign flip it
/// shrinks by eta_minus (floored at delta_min) and the sign memory resets;
/// the weight then moves by -sign(gradient) * step. Zero gradient leaves
/// weight and step untouched.
void rprop_step(TrainState& state, const NetworkParams& grads, NetworkParams& params,
                const TrainConfig& config);

struct TrainHistory {
    std::vector<double> mse;  // one entry per executed epoch, after its update
    double initial_mse = 0.0;
    bool reached_goal = false;

    [[nodiscard]] int epochs_run() const { return static_cast<int>(mse.size()); }
};

struct TrainedModel {
    NetworkParams params;
    Normalizer normalizer;
    TrainConfig config;
    TrainHistory history;
};

/// Full-batch Rprop on (angle, flow, watercut) -> pattern code. Runs
/// `epochs` epochs or stops early once the batch MSE reaches goal_mse.
/// Deterministic given (config, records).
TrainedModel train(const TrainConfig& config, std::span<const data::ExperimentRecord> records);

kb::FlowPattern predict_class(const NetworkParams& params, const Normalizer& normalizer,
                              const kb::OperatingPoint& point);

}  // namespace flowfis::bp
