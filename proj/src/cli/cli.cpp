#include "flowfis/cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flowfis/bp/model_io.hpp"
#include "flowfis/bp/rprop.hpp"
#include "flowfis/data/dataset.hpp"
#include "flowfis/eval/evaluation.hpp"
#include "flowfis/eval/sweep.hpp"
#include "flowfis/kb/knowledge_base.hpp"
#include "flowfis/util.hpp"

namespace flowfis::cli {

namespace {

using util::format_double;

constexpr const char* kKbEnvVar = "FLOWFIS_KB";

/// --kb flag > FLOWFIS_KB environment variable > built-in knowledge base.
fuzzy::FuzzySystem resolve_kb(const std::string& kb_path) {
    if (!kb_path.empty()) {
        return kb::load_kb_file(kb_path);
    }
    if (const char* env = std::getenv(kKbEnvVar); env != nullptr && *env != '\0') {
        return kb::load_kb_file(env);
    }
    return kb::build_default_kb();
}

std::vector<data::ExperimentRecord> resolve_dataset(const std::string& data_path) {
    if (data_path.empty()) {
        return data::embedded_dataset();
    }
    std::ifstream in(data_path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open data file '" + data_path + "'");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return data::parse_csv(text);
    } catch (const data::CsvError& e) {
        throw std::runtime_error("data file '" + data_path + "': " + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write file '" + path + "'");
    }
    out << content;
}

std::string rule_to_string(const fuzzy::FuzzySystem& system, std::size_t index) {
    const fuzzy::Rule& rule = system.rules()[index];
    std::ostringstream os;
    os << 'R' << index + 1 << " IF ";
    for (std::size_t c = 0; c < rule.antecedent.size(); ++c) {
        if (c > 0) os << " AND ";
        os << rule.antecedent[c].variable << " is " << rule.antecedent[c].term;
    }
    os << " THEN " << rule.consequent_class << " is " << rule.consequent_term;
    if (rule.weight != 1.0) {
        os << " [weight " << format_double(rule.weight) << ']';
    }
    return os.str();
}

void print_classification(std::ostream& out, const fuzzy::FuzzySystem& system,
                          const kb::ClassificationResult& result, bool trace) {
    for (const std::string& warning : result.warnings) {
        out << "warning: " << warning << '\n';
    }
    out << "predicted: " << kb::label(result.predicted) << '\n';
    out << "phi:\n" << std::fixed << std::setprecision(6);
    for (kb::FlowPattern p : kb::kPatternOrder) {
        out << "  " << std::setw(9) << std::left << kb::label(p) << std::right << ' '
            << result.phi_of(p) << '\n';
    }
    out.unsetf(std::ios::fixed);
    out << std::setprecision(6);
    if (trace) {
        out << "fired rules:\n";
        for (kb::FlowPattern p : kb::kPatternOrder) {
            out << "  " << kb::label(p) << ":";
            if (result.fired_of(p).empty()) {
                out << " (none)\n";
                continue;
            }
            out << '\n';
            for (const fuzzy::FiredRule& fired : result.fired_of(p)) {
                out << "    " << rule_to_string(system, fired.rule_index) << "  strength "
                    << format_double(fired.strength) << '\n';
            }
        }
    }
}

struct EvaluateOptions {
    std::string data_path;
    std::string kb_path;
    std::string split = "paper";
    double test_fraction = 0.3;
    std::uint64_t seed = 1;
    bool fis_only = false;
    std::string bp_model_path;
    std::string out_path;
    int epochs = 300;
    int hidden1 = 8;
    int hidden2 = 6;
};

int do_evaluate(const EvaluateOptions& opt, std::ostream& out) {
    const fuzzy::FuzzySystem system = resolve_kb(opt.kb_path);
    const std::vector<data::ExperimentRecord> records = resolve_dataset(opt.data_path);

    data::SplitSpec spec;
    spec.scheme = opt.split == "paper" ? data::SplitSpec::Scheme::paper
                                       : data::SplitSpec::Scheme::seeded_random;
    spec.test_fraction = opt.test_fraction;
    spec.seed = opt.seed;
    const data::Split split = data::split(records, spec);

    std::optional<bp::TrainedModel> model;
    if (!opt.fis_only) {
        if (!opt.bp_model_path.empty()) {
            model = bp::load_model_file(opt.bp_model_path);
        } else {
            bp::TrainConfig config;
            config.seed = opt.seed;
            config.epochs = opt.epochs;
            config.hidden1 = opt.hidden1;
            config.hidden2 = opt.hidden2;
            model = bp::train(config, split.train);
            out << "trained BP baseline on " << split.train.size() << " records ("
                << model->history.epochs_run() << " epochs, final mse "
                << format_double(model->history.mse.back()) << ")\n\n";
        }
    }

    const eval::EvaluationReport report =
        eval::evaluate(system, split.test, model ? &*model : nullptr);
    eval::print_report(out, report);

    if (!opt.out_path.empty()) {
        nlohmann::ordered_json doc;
        doc["dataset"] = opt.data_path.empty() ? "embedded" : opt.data_path;
        doc["split"] = opt.split;
        if (opt.split != "paper") {
            doc["test_fraction"] = opt.test_fraction;
        }
        doc["seed"] = opt.seed;
        doc["train_size"] = split.train.size();
        doc["test_size"] = split.test.size();
        doc["report"] = eval::report_to_json(report);
        write_file(opt.out_path, doc.dump(2) + "\n");
        out << "\nreport written to " << opt.out_path << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"oil-water two-phase flow pattern classification"};
    app.require_subcommand(1);

    // classify
    double angle = 0.0, flow = 0.0, watercut = 0.0;
    std::string kb_path;
    bool trace = false;
    CLI::App* classify = app.add_subcommand("classify", "classify one operating point");
    classify->add_option("--angle", angle, "pipe deviation from vertical, degrees")->required();
    classify->add_option("--flow", flow, "total flow, m3/d")->required();
    classify->add_option("--watercut", watercut, "water cut, fraction of total flow")->required();
    classify->add_option("--kb", kb_path, "knowledge base file (default: built-in)");
    classify->add_flag("--trace", trace, "print fired rules per class");

    // evaluate
    EvaluateOptions eval_opt;
    CLI::App* evaluate = app.add_subcommand("evaluate", "compare FIS and BP on a test split");
    evaluate->add_option("--data", eval_opt.data_path, "CSV dataset (default: embedded)");
    evaluate->add_option("--kb", eval_opt.kb_path, "knowledge base file (default: built-in)");
    evaluate->add_option("--split", eval_opt.split, "train/test split scheme")
        ->check(CLI::IsMember({"paper", "random"}))
        ->capture_default_str();
    evaluate->add_option("--test-fraction", eval_opt.test_fraction, "random split test fraction")
        ->capture_default_str();
    evaluate->add_option("--seed", eval_opt.seed, "split/training seed")->capture_default_str();
    CLI::Option* fis_only = evaluate->add_flag("--fis-only", eval_opt.fis_only,
                                               "skip the BP baseline entirely");
    evaluate->add_option("--bp-model", eval_opt.bp_model_path, "trained BP model file")
        ->excludes(fis_only);
    evaluate->add_option("--epochs", eval_opt.epochs, "BP training epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate->add_option("--h1", eval_opt.hidden1, "BP first hidden layer size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate->add_option("--h2", eval_opt.hidden2, "BP second hidden layer size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate->add_option("--out", eval_opt.out_path, "write a JSON report here");

    // train-bp
    std::string train_data_path, train_out_path;
    bp::TrainConfig train_config;
    CLI::App* train_bp = app.add_subcommand("train-bp", "train the BP baseline");
    train_bp->add_option("--data", train_data_path, "CSV dataset (default: embedded train split)");
    train_bp->add_option("--seed", train_config.seed, "initialization seed")->capture_default_str();
    train_bp->add_option("--epochs", train_config.epochs, "training epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_bp->add_option("--goal-mse", train_config.goal_mse, "stop once MSE reaches this")
        ->capture_default_str();
    train_bp->add_option("--h1", train_config.hidden1, "first hidden layer size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_bp->add_option("--h2", train_config.hidden2, "second hidden layer size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_bp->add_option("--out", train_out_path, "model file to write")->required();

    // sweep
    double sweep_angle = 0.0;
    std::string sweep_kb_path, sweep_out_path, sweep_format = "csv";
    eval::Axis flow_axis{100.0, 600.0, 50};
    eval::Axis wc_axis{0.0, 1.0, 50};
    CLI::App* sweep = app.add_subcommand("sweep", "flow-pattern map over flow x watercut");
    sweep->add_option("--angle", sweep_angle, "fixed pipe angle, degrees")->required();
    sweep->add_option("--kb", sweep_kb_path, "knowledge base file (default: built-in)");
    sweep->add_option("--flow-min", flow_axis.min)->capture_default_str();
    sweep->add_option("--flow-max", flow_axis.max)->capture_default_str();
    sweep->add_option("--flow-steps", flow_axis.steps)
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    sweep->add_option("--wc-min", wc_axis.min)->capture_default_str();
    sweep->add_option("--wc-max", wc_axis.max)->capture_default_str();
    sweep->add_option("--wc-steps", wc_axis.steps)
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    sweep->add_option("--format", sweep_format, "output format")
        ->check(CLI::IsMember({"csv", "svg"}))
        ->capture_default_str();
    sweep->add_option("--out", sweep_out_path, "grid file to write")->required();

    // validate-kb
    std::string validate_path;
    CLI::App* validate_kb = app.add_subcommand("validate-kb", "check a knowledge base file");
    validate_kb->add_option("kb", validate_path, "knowledge base file")->required();

    // export-data / export-kb
    std::string export_data_path, export_kb_path;
    CLI::App* export_data =
        app.add_subcommand("export-data", "write the embedded dataset as CSV");
    export_data->add_option("--out", export_data_path, "file to write (default: stdout)");
    CLI::App* export_kb =
        app.add_subcommand("export-kb", "write the built-in knowledge base as JSON");
    export_kb->add_option("--out", export_kb_path, "file to write (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (classify->parsed()) {
            const fuzzy::FuzzySystem system = resolve_kb(kb_path);
            const kb::ClassificationResult result =
                kb::classify(system, {angle, flow, watercut});
            print_classification(out, system, result, trace);
            return 0;
        }
        if (evaluate->parsed()) {
            return do_evaluate(eval_opt, out);
        }
        if (train_bp->parsed()) {
            std::vector<data::ExperimentRecord> records;
            if (train_data_path.empty()) {
                // default: the train side of the paper split
                records = data::split(data::embedded_dataset(), {}).train;
            } else {
                records = resolve_dataset(train_data_path);
            }
            const bp::TrainedModel model = bp::train(train_config, records);
            bp::save_model_file(model, train_out_path);
            out << "trained on " << records.size() << " records\n";
            out << "epochs run: " << model.history.epochs_run() << '\n';
            out << "initial mse: " << format_double(model.history.initial_mse) << '\n';
            out << "final mse: " << format_double(model.history.mse.back()) << '\n';
            out << "goal reached: " << (model.history.reached_goal ? "yes" : "no") << '\n';
            out << "model written to " << train_out_path << '\n';
            return 0;
        }
        if (sweep->parsed()) {
            const fuzzy::FuzzySystem system = resolve_kb(sweep_kb_path);
            const eval::SweepGrid grid = run_sweep(system, sweep_angle, flow_axis, wc_axis);
            write_file(sweep_out_path,
                       sweep_format == "svg" ? eval::sweep_to_svg(grid) : eval::sweep_to_csv(grid));
            out << "sweep written to " << sweep_out_path << '\n';
            return 0;
        }
        if (validate_kb->parsed()) {
            fuzzy::SystemConfig config;
            try {
                std::ifstream in(validate_path, std::ios::binary);
                if (!in) {
                    throw kb::KbParseError("cannot open knowledge base file '" + validate_path +
                                           "'");
                }
                const nlohmann::json doc = nlohmann::json::parse(in);
                config = kb::kb_config_from_json(doc);
            } catch (const nlohmann::json::parse_error& e) {
                err << "parse error: " << e.what() << '\n';
                return 2;
            }
            const std::vector<fuzzy::Diagnostic> diagnostics = fuzzy::FuzzySystem::validate(config);
            if (diagnostics.empty()) {
                out << "OK\n";
                return 0;
            }
            for (const fuzzy::Diagnostic& d : diagnostics) {
                err << '[' << fuzzy::to_string(d.code) << "] " << d.where << ": " << d.message
                    << '\n';
            }
            return 2;
        }
        if (export_data->parsed()) {
            const std::string csv = data::serialize_csv(data::embedded_dataset());
            if (export_data_path.empty()) {
                out << csv;
            } else {
                write_file(export_data_path, csv);
                out << "dataset written to " << export_data_path << '\n';
            }
            return 0;
        }
        if (export_kb->parsed()) {
            const std::string doc = kb::kb_to_string(kb::build_default_kb());
            if (export_kb_path.empty()) {
                out << doc;
            } else {
                write_file(export_kb_path, doc);
                out << "knowledge base written to " << export_kb_path << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace flowfis::cli
