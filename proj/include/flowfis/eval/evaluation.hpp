#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "flowfis/bp/rprop.hpp"
#include "flowfis/data/dataset.hpp"
#include "flowfis/fuzzy/system.hpp"
#include "flowfis/kb/knowledge_base.hpp"

namespace flowfis::eval {

/// 4x4 confusion counts in kb::kPatternOrder, rows = actual, cols = predicted.
struct Confusion {
    std::array<std::array<int, 4>, 4> counts{};

    void add(kb::FlowPattern actual, kb::FlowPattern predicted);
    [[nodiscard]] int total() const;
    [[nodiscard]] int diagonal() const;
    [[nodiscard]] double accuracy() const;  // diagonal / total

    bool operator==(const Confusion&) const = default;
};

struct EvalRow {
    data::ExperimentRecord point;
    kb::FlowPattern fis_predicted = kb::FlowPattern::water_in_oil;
    std::optional<kb::FlowPattern> bp_predicted;
};

struct EvaluationReport {
    std::vector<EvalRow> rows;
    Confusion fis_confusion;
    std::optional<Confusion> bp_confusion;
    std::vector<std::size_t> disagreements;  // row indices where FIS and BP differ

    [[nodiscard]] double fis_accuracy() const { return fis_confusion.accuracy(); }
    [[nodiscard]] std::optional<double> bp_accuracy() const;
};

/// Classifies every test record with the fuzzy system and, when a model is
/// given, with the neural baseline.
EvaluationReport evaluate(const fuzzy::FuzzySystem& system,
                          std::span<const data::ExperimentRecord> test,
                          const bp::TrainedModel* model = nullptr);

nlohmann::ordered_json report_to_json(const EvaluationReport& report);
void print_report(std::ostream& os, const EvaluationReport& report);

}  // namespace flowfis::eval
