#include "flowfis/eval/evaluation.hpp"

#include <iomanip>

#include <nlohmann/json.hpp>

#include "flowfis/util.hpp"

namespace flowfis::eval {

using kb::FlowPattern;
using kb::kPatternOrder;
using kb::label;
using kb::pattern_index;

void Confusion::add(FlowPattern actual, FlowPattern predicted) {
    ++counts[pattern_index(actual)][pattern_index(predicted)];
}

int Confusion::total() const {
    int sum = 0;
    for (const auto& row : counts) {
        for (int v : row) sum += v;
    }
    return sum;
}

int Confusion::diagonal() const {
    int sum = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        sum += counts[i][i];
    }
    return sum;
}

double Confusion::accuracy() const {
    const int n = total();
    return n == 0 ? 0.0 : static_cast<double>(diagonal()) / static_cast<double>(n);
}

std::optional<double> EvaluationReport::bp_accuracy() const {
    if (!bp_confusion) {
        return std::nullopt;
    }
    return bp_confusion->accuracy();
}

EvaluationReport evaluate(const fuzzy::FuzzySystem& system,
                          std::span<const data::ExperimentRecord> test,
                          const bp::TrainedModel* model) {
    EvaluationReport report;
    if (model) {
        report.bp_confusion = Confusion{};
    }
    for (const data::ExperimentRecord& rec : test) {
        EvalRow row;
        row.point = rec;
        const kb::OperatingPoint point{rec.angle_deg, rec.flow_m3d, rec.watercut};
        row.fis_predicted = kb::classify(system, point).predicted;
        report.fis_confusion.add(rec.pattern, row.fis_predicted);
        if (model) {
            row.bp_predicted = bp::predict_class(model->params, model->normalizer, point);
            report.bp_confusion->add(rec.pattern, *row.bp_predicted);
            if (*row.bp_predicted != row.fis_predicted) {
                report.disagreements.push_back(report.rows.size());
            }
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

nlohmann::ordered_json report_to_json(const EvaluationReport& report) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["rows"] = ordered_json::array();
    for (const EvalRow& row : report.rows) {
        ordered_json node;
        node["angle_deg"] = row.point.angle_deg;
        node["flow_m3d"] = row.point.flow_m3d;
        node["watercut_frac"] = row.point.watercut;
        node["actual"] = label(row.point.pattern);
        node["fis"] = label(row.fis_predicted);
        if (row.bp_predicted) {
            node["bp"] = label(*row.bp_predicted);
        }
        doc["rows"].push_back(std::move(node));
    }
    const auto confusion_json = [](const Confusion& c) {
        ordered_json node;
        for (FlowPattern actual : kPatternOrder) {
            ordered_json row = ordered_json::array();
            for (FlowPattern predicted : kPatternOrder) {
                row.push_back(c.counts[pattern_index(actual)][pattern_index(predicted)]);
            }
            node[std::string(label(actual))] = std::move(row);
        }
        return node;
    };
    doc["fis"] = {{"correct", report.fis_confusion.diagonal()},
                  {"total", report.fis_confusion.total()},
                  {"accuracy", report.fis_accuracy()},
                  {"confusion", confusion_json(report.fis_confusion)}};
    if (report.bp_confusion) {
        doc["bp"] = {{"correct", report.bp_confusion->diagonal()},
                     {"total", report.bp_confusion->total()},
                     {"accuracy", *report.bp_accuracy()},
                     {"confusion", confusion_json(*report.bp_confusion)}};
        doc["disagreements"] = report.disagreements;
    }
    return doc;
}

namespace {

void print_confusion(std::ostream& os, const Confusion& confusion) {
    os << "  actual \\ predicted";
    for (FlowPattern p : kPatternOrder) {
        os << std::setw(10) << label(p);
    }
    os << '\n';
    for (FlowPattern actual : kPatternOrder) {
        os << "  " << std::setw(18) << label(actual);
        for (FlowPattern predicted : kPatternOrder) {
            os << std::setw(10)
               << confusion.counts[pattern_index(actual)][pattern_index(predicted)];
        }
        os << '\n';
    }
}

}  // namespace

void print_report(std::ostream& os, const EvaluationReport& report) {
    os << std::setw(10) << "angle" << std::setw(10) << "flow" << std::setw(10) << "watercut"
       << std::setw(10) << "actual" << std::setw(10) << "FIS";
    if (report.bp_confusion) {
        os << std::setw(10) << "BP";
    }
    os << '\n';
    for (const EvalRow& row : report.rows) {
        os << std::setw(10) << util::format_double(row.point.angle_deg) << std::setw(10)
           << util::format_double(row.point.flow_m3d) << std::setw(10)
           << util::format_double(row.point.watercut) << std::setw(10) << label(row.point.pattern)
           << std::setw(10) << label(row.fis_predicted);
        if (row.bp_predicted) {
            os << std::setw(10) << label(*row.bp_predicted);
        }
        os << '\n';
    }
    os << "\nFIS accuracy: " << report.fis_confusion.diagonal() << '/'
       << report.fis_confusion.total() << " ("
       << util::format_double(100.0 * report.fis_accuracy()) << "%)\n";
    os << "FIS confusion matrix:\n";
    print_confusion(os, report.fis_confusion);
    if (report.bp_confusion) {
        os << "\nBP accuracy: " << report.bp_confusion->diagonal() << '/'
           << report.bp_confusion->total() << " ("
           << util::format_double(100.0 * *report.bp_accuracy()) << "%)\n";
        os << "BP confusion matrix:\n";
        print_confusion(os, *report.bp_confusion);
        os << "\nFIS/BP disagreements: " << report.disagreements.size() << '\n';
        for (std::size_t idx : report.disagreements) {
            const EvalRow& row = report.rows[idx];
            os << "  (" << util::format_double(row.point.angle_deg) << ", "
               << util::format_double(row.point.flow_m3d) << ", "
               << util::format_double(row.point.watercut) << "): FIS "
               << label(row.fis_predicted) << " vs BP " << label(*row.bp_predicted)
               << " (actual " << label(row.point.pattern) << ")\n";
        }
    }
}

}  // namespace flowfis::eval
