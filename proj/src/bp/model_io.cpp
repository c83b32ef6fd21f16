#include "flowfis/bp/model_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace flowfis::bp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& expect_node(const json& node, const char* key) {
    if (!node.is_object() || !node.contains(key)) {
        throw ModelIoError(std::string("model file: missing key '") + key + "'");
    }
    return node.at(key);
}

template <class T>
T expect(const json& node, const char* key) {
    try {
        return expect_node(node, key).get<T>();
    } catch (const json::exception&) {
        throw ModelIoError(std::string("model file: malformed value for '") + key + "'");
    }
}

}  // namespace

std::string model_to_string(const TrainedModel& model) {
    ordered_json doc;
    doc["format"] = "flowfis-bp-model";
    doc["version"] = 1;
    doc["layers"] = model.params.layers;
    doc["weights"] = ordered_json::array();
    doc["biases"] = ordered_json::array();
    for (int l = 0; l < 3; ++l) {
        doc["weights"].push_back(model.params.weights[l].a);
        doc["biases"].push_back(model.params.biases[l]);
    }
    doc["normalizer"] = {{"lo", model.normalizer.lo}, {"hi", model.normalizer.hi}};
    doc["config"] = {
        {"epochs", model.config.epochs},       {"goal_mse", model.config.goal_mse},
        {"delta0", model.config.delta0},       {"eta_plus", model.config.eta_plus},
        {"eta_minus", model.config.eta_minus}, {"delta_max", model.config.delta_max},
        {"delta_min", model.config.delta_min}, {"seed", model.config.seed},
        {"hidden1", model.config.hidden1},     {"hidden2", model.config.hidden2},
    };
    doc["epochs_run"] = model.history.epochs_run();
    doc["reached_goal"] = model.history.reached_goal;
    doc["initial_mse"] = model.history.initial_mse;
    doc["final_mse"] = model.history.mse.empty() ? model.history.initial_mse
                                                 : model.history.mse.back();
    return doc.dump(2) + "\n";
}

TrainedModel model_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelIoError(std::string("model file: ") + e.what());
    }
    if (expect<std::string>(doc, "format") != "flowfis-bp-model" ||
        expect<int>(doc, "version") != 1) {
        throw ModelIoError("model file: unsupported format or version");
    }

    TrainedModel model;
    const auto layers = expect<std::array<int, 4>>(doc, "layers");
    model.params.layers = layers;
    const json& weights = doc.at("weights");
    const json& biases = doc.at("biases");
    if (!weights.is_array() || weights.size() != 3 || !biases.is_array() || biases.size() != 3) {
        throw ModelIoError("model file: expected 3 weight matrices and 3 bias vectors");
    }
    for (int l = 0; l < 3; ++l) {
        Matrix w(layers[static_cast<std::size_t>(l) + 1], layers[static_cast<std::size_t>(l)]);
        const auto flat = weights[static_cast<std::size_t>(l)].get<std::vector<double>>();
        if (flat.size() != w.a.size()) {
            throw ModelIoError("model file: weight matrix size mismatch");
        }
        w.a = flat;
        model.params.weights[l] = std::move(w);
        model.params.biases[l] = biases[static_cast<std::size_t>(l)].get<std::vector<double>>();
        if (model.params.biases[l].size() != static_cast<std::size_t>(layers[static_cast<std::size_t>(l) + 1])) {
            throw ModelIoError("model file: bias vector size mismatch");
        }
    }

    const json& normalizer = doc.at("normalizer");
    model.normalizer.lo = expect<std::array<double, 3>>(normalizer, "lo");
    model.normalizer.hi = expect<std::array<double, 3>>(normalizer, "hi");

    const json& config = doc.at("config");
    model.config.epochs = expect<int>(config, "epochs");
    model.config.goal_mse = expect<double>(config, "goal_mse");
    model.config.delta0 = expect<double>(config, "delta0");
    model.config.eta_plus = expect<double>(config, "eta_plus");
    model.config.eta_minus = expect<double>(config, "eta_minus");
    model.config.delta_max = expect<double>(config, "delta_max");
    model.config.delta_min = expect<double>(config, "delta_min");
    model.config.seed = expect<std::uint64_t>(config, "seed");
    model.config.hidden1 = expect<int>(config, "hidden1");
    model.config.hidden2 = expect<int>(config, "hidden2");

    model.history.reached_goal = expect<bool>(doc, "reached_goal");
    model.history.initial_mse = expect<double>(doc, "initial_mse");
    model.history.mse.assign(static_cast<std::size_t>(expect<int>(doc, "epochs_run")), 0.0);
    if (!model.history.mse.empty()) {
        model.history.mse.back() = expect<double>(doc, "final_mse");
    }
    return model;
}

void save_model_file(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ModelIoError("cannot write model file '" + path.string() + "'");
    }
    out << model_to_string(model);
}

TrainedModel load_model_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ModelIoError("cannot open model file '" + path.string() + "'");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_string(text);
}

}  // namespace flowfis::bp
