#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "flowfis/bp/rprop.hpp"

namespace flowfis::bp {

struct ModelIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// JSON model document: layer sizes, weights, biases, normalizer bounds,
/// the training config used, and the final MSE. Round-trip stable and
/// byte-deterministic for identical models.
std::string model_to_string(const TrainedModel& model);
TrainedModel model_from_string(const std::string& text);

void save_model_file(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model_file(const std::filesystem::path& path);

}  // namespace flowfis::bp
