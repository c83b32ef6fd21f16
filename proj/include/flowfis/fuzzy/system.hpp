#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flowfis/fuzzy/membership.hpp"
#include "flowfis/fuzzy/rule.hpp"
#include "flowfis/fuzzy/variable.hpp"

namespace flowfis::fuzzy {

/// One finding from validate(). An empty diagnostics list means the system
/// is accepted.
struct Diagnostic {
    enum class Code {
        universe_bounds,
        universe_resolution,
        too_few_terms,
        unsorted_breakpoints,
        breakpoints_outside_universe,
        coverage_gap,
        duplicate_variable,
        duplicate_term,
        duplicate_class,
        no_inputs,
        no_output_terms,
        no_classes,
        no_rules,
        empty_antecedent,
        unknown_variable,
        unknown_term,
        unknown_class,
        unknown_output_term,
        weight_out_of_range,
        class_without_rules,
    };

    Code code;
    std::string where;    // e.g. "inputs[0].terms[2]" or "rules[7]"
    std::string message;  // human-readable detail (names, intervals, values)
};

std::string_view to_string(Diagnostic::Code code);

/// Raised by FuzzySystem::create when validation finds violations.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  private:
    std::vector<Diagnostic> diagnostics_;
};

/// Raised when an operation references a variable, term, or class the
/// system does not define.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Plain data describing a system prior to validation.
struct SystemConfig {
    std::vector<LinguisticVariable> inputs;
    Universe output_universe{0.0, 1.0, 1001};
    std::vector<Term> output_terms;
    std::vector<std::string> classes;
    std::vector<Rule> rules;

    bool operator==(const SystemConfig&) const = default;
};

struct FiredRule {
    std::size_t rule_index;  // position in rules()
    double strength;         // weighted min over clause degrees, > 0

    bool operator==(const FiredRule&) const = default;
};

struct ClassInference {
    double phi = 0.0;              // centroid of the aggregated set; 0 when nothing fired
    std::vector<FiredRule> fired;  // ascending rule index

    bool operator==(const ClassInference&) const = default;
};

struct InferenceResult {
    std::vector<ClassInference> per_class;  // aligned with classes()
    std::vector<std::string> warnings;      // clamp notes, in input order

    bool operator==(const InferenceResult&) const = default;
};

/// Variable name -> (term -> degree).
using FuzzifiedInputs = std::map<std::string, TermDegrees, std::less<>>;

/// strength = weight * min over clauses of the clause degree.
/// Throws ConfigError when a clause names an unknown variable or term.
double rule_strength(const Rule& rule, const FuzzifiedInputs& fuzzified);

/// A validated, immutable Mamdani system. The operator suite is the
/// classical one: AND = min, implication = min (clipping), aggregation =
/// pointwise max, defuzzification = centroid. All operations are pure;
/// concurrent reads are safe.
class FuzzySystem {
  public:
    static std::vector<Diagnostic> validate(const SystemConfig& config);

    /// Validates and takes ownership of the config. Throws ValidationError
    /// carrying the full diagnostics list when the config is rejected.
    static FuzzySystem create(SystemConfig config);

    [[nodiscard]] const std::vector<LinguisticVariable>& inputs() const { return cfg_.inputs; }
    [[nodiscard]] const Universe& output_universe() const { return cfg_.output_universe; }
    [[nodiscard]] const std::vector<Term>& output_terms() const { return cfg_.output_terms; }
    [[nodiscard]] const std::vector<std::string>& classes() const { return cfg_.classes; }
    [[nodiscard]] const std::vector<Rule>& rules() const { return cfg_.rules; }
    [[nodiscard]] const SystemConfig& config() const { return cfg_; }

    [[nodiscard]] std::size_t class_index(std::string_view label) const;  // throws ConfigError

    /// Per-variable term degrees at the clamped inputs. `values` is aligned
    /// with inputs(). Inputs farther outside their universe than a small
    /// tolerance produce a warning; either way the clamped value is used.
    [[nodiscard]] std::pair<FuzzifiedInputs, std::vector<std::string>> fuzzify(
        std::span<const double> values) const;

    /// Mamdani inference restricted to one output class: clip each firing
    /// rule's consequent term at its strength, aggregate by pointwise max,
    /// defuzzify by centroid. phi = 0 when no rule of the class fires.
    [[nodiscard]] ClassInference infer_class(std::span<const double> values,
                                             std::string_view class_label) const;

    /// Inference for every class at once (single fuzzification pass).
    [[nodiscard]] InferenceResult infer(std::span<const double> values) const;

  private:
    explicit FuzzySystem(SystemConfig config) : cfg_(std::move(config)) {}

    [[nodiscard]] ClassInference aggregate_class(std::span<const double> strengths,
                                                 std::string_view class_label) const;

    SystemConfig cfg_;
};

}  // namespace flowfis::fuzzy
