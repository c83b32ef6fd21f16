#include "flowfis/bp/network.hpp"

#include <cmath>
#include <stdexcept>

namespace flowfis::bp {

namespace {

// splitmix64 with a 53-bit uniform; keeps initialization bit-reproducible
// across standard libraries.
struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double symmetric(double bound) { return (2.0 * uniform01() - 1.0) * bound; }
};

}  // namespace

NetworkParams zeros_like(const NetworkParams& params) {
    NetworkParams z;
    z.layers = params.layers;
    for (int l = 0; l < 3; ++l) {
        z.weights[l] = Matrix(params.weights[l].rows, params.weights[l].cols);
        z.biases[l].assign(params.biases[l].size(), 0.0);
    }
    return z;
}

NetworkParams init_network(std::uint64_t seed, int hidden1, int hidden2) {
    if (hidden1 < 1 || hidden2 < 1) {
        throw std::invalid_argument("hidden layer sizes must be >= 1");
    }
    NetworkParams params;
    params.layers = {3, hidden1, hidden2, 1};
    Rng rng{seed};
    for (int l = 0; l < 3; ++l) {
        const int fan_in = params.layers[l];
        const int fan_out = params.layers[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        params.weights[l] = Matrix(fan_out, fan_in);
        for (double& w : params.weights[l].a) {
            w = rng.symmetric(bound);
        }
        params.biases[l].resize(static_cast<std::size_t>(fan_out));
        for (double& b : params.biases[l]) {
            b = rng.symmetric(bound);
        }
    }
    return params;
}

double forward(const NetworkParams& params, std::span<const double, 3> x, Activations* cache) {
    std::vector<double> current(x.begin(), x.end());
    if (cache) {
        cache->values[0] = current;
    }
    for (int l = 0; l < 3; ++l) {
        const Matrix& w = params.weights[l];
        std::vector<double> next(static_cast<std::size_t>(w.rows));
        for (int r = 0; r < w.rows; ++r) {
            double z = params.biases[l][static_cast<std::size_t>(r)];
            for (int c = 0; c < w.cols; ++c) {
                z += w(r, c) * current[static_cast<std::size_t>(c)];
            }
            next[static_cast<std::size_t>(r)] = l < 2 ? std::tanh(z) : z;  // linear output layer
        }
        current = std::move(next);
        if (cache) {
            cache->values[static_cast<std::size_t>(l) + 1] = current;
        }
    }
    return current[0];
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.empty() || predictions.size() != targets.size()) {
        throw std::invalid_argument("mse requires equal-length non-empty batches");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = predictions[i] - targets[i];
        sum += e * e;
    }
    return sum / static_cast<double>(predictions.size());
}

double batch_mse(const NetworkParams& params, std::span<const Sample> batch) {
    std::vector<double> predictions(batch.size());
    std::vector<double> targets(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        predictions[i] = forward(params, batch[i].x);
        targets[i] = batch[i].target;
    }
    return mse(predictions, targets);
}

NetworkParams gradients(const NetworkParams& params, std::span<const Sample> batch) {
    if (batch.empty()) {
        throw std::invalid_argument("gradient of an empty batch is undefined");
    }
    NetworkParams grads = zeros_like(params);
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    Activations cache;
    for (const Sample& sample : batch) {
        const double y = forward(params, sample.x, &cache);
        // dL/dy for L = mean((y - t)^2)
        std::vector<double> delta{2.0 * (y - sample.target) * inv_n};
        for (int l = 2; l >= 0; --l) {
            const Matrix& w = params.weights[l];
            const std::vector<double>& in = cache.values[static_cast<std::size_t>(l)];
            for (int r = 0; r < w.rows; ++r) {
                grads.biases[l][static_cast<std::size_t>(r)] += delta[static_cast<std::size_t>(r)];
                for (int c = 0; c < w.cols; ++c) {
                    grads.weights[l](r, c) += delta[static_cast<std::size_t>(r)] * in[static_cast<std::size_t>(c)];
                }
            }
            if (l == 0) {
                break;
            }
            // propagate through W and the tanh of the layer below
            std::vector<double> prev(static_cast<std::size_t>(w.cols), 0.0);
            for (int c = 0; c < w.cols; ++c) {
                double acc = 0.0;
                for (int r = 0; r < w.rows; ++r) {
                    acc += w(r, c) * delta[static_cast<std::size_t>(r)];
                }
                const double a = in[static_cast<std::size_t>(c)];
                prev[static_cast<std::size_t>(c)] = acc * (1.0 - a * a);
            }
            delta = std::move(prev);
        }
    }
    return grads;
}

Normalizer Normalizer::fit(std::span<const std::array<double, 3>> features) {
    if (features.empty()) {
        throw std::invalid_argument("cannot fit a normalizer on an empty feature set");
    }
    Normalizer n;
    n.lo = n.hi = features.front();
    for (const auto& f : features) {
        for (int i = 0; i < 3; ++i) {
            n.lo[static_cast<std::size_t>(i)] = std::min(n.lo[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(i)]);
            n.hi[static_cast<std::size_t>(i)] = std::max(n.hi[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(i)]);
        }
    }
    return n;
}

std::array<double, 3> Normalizer::normalize(const std::array<double, 3>& x) const {
    std::array<double, 3> y{};
    for (std::size_t i = 0; i < 3; ++i) {
        const double range = hi[i] - lo[i];
        y[i] = range > 0.0 ? 2.0 * (x[i] - lo[i]) / range - 1.0 : 0.0;
    }
    return y;
}

std::array<double, 3> Normalizer::denormalize(const std::array<double, 3>& y) const {
    std::array<double, 3> x{};
    for (std::size_t i = 0; i < 3; ++i) {
        x[i] = lo[i] + (y[i] + 1.0) * 0.5 * (hi[i] - lo[i]);
    }
    return x;
}

kb::FlowPattern nearest_pattern(double raw_output) {
    // ceil(y - 0.5) is the nearest integer with half-integers rounding down
    const double rounded = std::ceil(raw_output - 0.5);
    const int code = rounded < 1.0 ? 1 : (rounded > 4.0 ? 4 : static_cast<int>(rounded));
    return *kb::pattern_from_code(code);
}

}  // namespace flowfis::bp
