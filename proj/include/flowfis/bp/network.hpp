#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "flowfis/kb/flow_pattern.hpp"

namespace flowfis::bp {

/// Dense row-major matrix; just enough linear algebra for the MLP.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    bool operator==(const Matrix&) const = default;
};

/// Weights and biases of the fixed 3 -> h1 -> h2 -> 1 architecture. Hidden
/// layers use tanh, the output is linear (it regresses the numeric flow
/// pattern codes 1..4). Also reused as the container for gradients and the
/// per-weight Rprop state, which share the shapes.
struct NetworkParams {
    std::array<int, 4> layers{3, 8, 6, 1};
    std::array<Matrix, 3> weights;             // weights[l]: layers[l+1] x layers[l]
    std::array<std::vector<double>, 3> biases;  // biases[l]: layers[l+1]

    bool operator==(const NetworkParams&) const = default;
};

/// Same-shaped zero structure (for gradients and optimizer state).
NetworkParams zeros_like(const NetworkParams& params);

/// Fan-in scaled symmetric uniform initialization, deterministic in `seed`.
NetworkParams init_network(std::uint64_t seed, int hidden1, int hidden2);

/// Forward-pass cache: activations[0] is the input, [1] and [2] the tanh
/// hidden outputs, [3] the single linear output.
struct Activations {
    std::array<std::vector<double>, 4> values;
};

double forward(const NetworkParams& params, std::span<const double, 3> x,
               Activations* cache = nullptr);

/// Mean squared error; throws std::invalid_argument on empty or mismatched
/// batches.
double mse(std::span<const double> predictions, std::span<const double> targets);

struct Sample {
    std::array<double, 3> x;  // normalized features
    double target = 0.0;      // flow pattern code
};

/// Analytic gradient of the batch MSE with respect to every weight and bias.
NetworkParams gradients(const NetworkParams& params, std::span<const Sample> batch);

double batch_mse(const NetworkParams& params, std::span<const Sample> batch);

/// Per-feature affine map onto [-1, 1], fitted on the training features.
struct Normalizer {
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};

    static Normalizer fit(std::span<const std::array<double, 3>> features);
    [[nodiscard]] std::array<double, 3> normalize(const std::array<double, 3>& x) const;
    [[nodiscard]] std::array<double, 3> denormalize(const std::array<double, 3>& y) const;

    bool operator==(const Normalizer&) const = default;
};

/// Nearest flow-pattern code to the raw network output, clamped to [1, 4];
/// half-integer outputs round toward the lower code.
kb::FlowPattern nearest_pattern(double raw_output);

}  // namespace flowfis::bp
