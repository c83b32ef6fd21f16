#include "flowfis/fuzzy/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "flowfis/util.hpp"

namespace flowfis::fuzzy {

namespace {

using util::format_double;

std::string index_location(std::string_view array, std::size_t i) {
    std::ostringstream os;
    os << array << '[' << i << ']';
    return os.str();
}

void check_universe(const Universe& u, const std::string& where,
                    std::vector<Diagnostic>& out) {
    if (!(u.lo < u.hi)) {
        out.push_back({Diagnostic::Code::universe_bounds, where,
                       "universe requires lo < hi, got [" + format_double(u.lo) + ", " +
                           format_double(u.hi) + "]"});
    }
    if (u.resolution < 3 || u.resolution % 2 == 0) {
        out.push_back({Diagnostic::Code::universe_resolution, where,
                       "resolution must be an odd integer >= 3, got " +
                           std::to_string(u.resolution)});
    }
}

// Appends ordering/range diagnostics for one term; returns whether the term
// is usable for the coverage scan.
bool check_term(const Term& term, const Universe& u, const std::string& where,
                std::vector<Diagnostic>& out) {
    bool usable = true;
    if (!term.mf.breakpoints_sorted()) {
        std::ostringstream os;
        os << "breakpoints of term '" << term.label << "' are not non-decreasing:";
        for (double p : term.mf.breakpoints()) os << ' ' << format_double(p);
        out.push_back({Diagnostic::Code::unsorted_breakpoints, where, os.str()});
        usable = false;
    }
    if (term.mf.support_lo() < u.lo || term.mf.support_hi() > u.hi) {
        out.push_back({Diagnostic::Code::breakpoints_outside_universe, where,
                       "term '" + term.label + "' has breakpoints outside [" +
                           format_double(u.lo) + ", " + format_double(u.hi) + "]"});
        usable = false;
    }
    return usable;
}

void check_coverage(const LinguisticVariable& var, const std::string& where,
                    std::vector<Diagnostic>& out) {
    const Universe& u = var.universe();
    int gap_begin = -1;
    const auto report = [&](int first, int last) {
        out.push_back({Diagnostic::Code::coverage_gap, where,
                       "no term of '" + var.name() + "' covers [" +
                           format_double(u.sample(first)) + ", " +
                           format_double(u.sample(last)) + "]"});
    };
    for (int i = 0; i < u.resolution; ++i) {
        const double x = u.sample(i);
        double best = 0.0;
        for (const Term& term : var.terms()) {
            best = std::max(best, term.mf.eval(x));
        }
        if (best <= 0.0) {
            if (gap_begin < 0) gap_begin = i;
        } else if (gap_begin >= 0) {
            report(gap_begin, i - 1);
            gap_begin = -1;
        }
    }
    if (gap_begin >= 0) {
        report(gap_begin, u.resolution - 1);
    }
}

}  // namespace

std::string_view to_string(Diagnostic::Code code) {
    switch (code) {
        case Diagnostic::Code::universe_bounds: return "universe-bounds";
        case Diagnostic::Code::universe_resolution: return "universe-resolution";
        case Diagnostic::Code::too_few_terms: return "too-few-terms";
        case Diagnostic::Code::unsorted_breakpoints: return "unsorted-breakpoints";
        case Diagnostic::Code::breakpoints_outside_universe: return "breakpoints-outside-universe";
        case Diagnostic::Code::coverage_gap: return "coverage-gap";
        case Diagnostic::Code::duplicate_variable: return "duplicate-variable";
        case Diagnostic::Code::duplicate_term: return "duplicate-term";
        case Diagnostic::Code::duplicate_class: return "duplicate-class";
        case Diagnostic::Code::no_inputs: return "no-inputs";
        case Diagnostic::Code::no_output_terms: return "no-output-terms";
        case Diagnostic::Code::no_classes: return "no-classes";
        case Diagnostic::Code::no_rules: return "no-rules";
        case Diagnostic::Code::empty_antecedent: return "empty-antecedent";
        case Diagnostic::Code::unknown_variable: return "unknown-variable";
        case Diagnostic::Code::unknown_term: return "unknown-term";
        case Diagnostic::Code::unknown_class: return "unknown-class";
        case Diagnostic::Code::unknown_output_term: return "unknown-output-term";
        case Diagnostic::Code::weight_out_of_range: return "weight-out-of-range";
        case Diagnostic::Code::class_without_rules: return "class-without-rules";
    }
    return "unknown";
}

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&diagnostics] {
          std::ostringstream os;
          os << "system validation failed with " << diagnostics.size() << " diagnostic(s):";
          for (const Diagnostic& d : diagnostics) {
              os << "\n  [" << to_string(d.code) << "] " << d.where << ": " << d.message;
          }
          return os.str();
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> FuzzySystem::validate(const SystemConfig& config) {
    std::vector<Diagnostic> out;

    if (config.inputs.empty()) {
        out.push_back({Diagnostic::Code::no_inputs, "inputs", "system declares no input variables"});
    }
    std::set<std::string> var_names;
    for (std::size_t i = 0; i < config.inputs.size(); ++i) {
        const LinguisticVariable& var = config.inputs[i];
        const std::string where = index_location("inputs", i);
        if (!var_names.insert(var.name()).second) {
            out.push_back({Diagnostic::Code::duplicate_variable, where,
                           "variable name '" + var.name() + "' appears more than once"});
        }
        check_universe(var.universe(), where, out);
        if (var.terms().size() < 2) {
            out.push_back({Diagnostic::Code::too_few_terms, where,
                           "variable '" + var.name() + "' needs at least 2 terms, has " +
                               std::to_string(var.terms().size())});
        }
        bool coverage_scan_ok = var.universe().lo < var.universe().hi &&
                                var.universe().resolution >= 3 && !var.terms().empty();
        std::set<std::string> term_labels;
        for (std::size_t t = 0; t < var.terms().size(); ++t) {
            const Term& term = var.terms()[t];
            const std::string term_where = where + "." + index_location("terms", t);
            if (!term_labels.insert(term.label).second) {
                out.push_back({Diagnostic::Code::duplicate_term, term_where,
                               "term label '" + term.label + "' appears more than once in '" +
                                   var.name() + "'"});
            }
            coverage_scan_ok &= check_term(term, var.universe(), term_where, out);
        }
        if (coverage_scan_ok) {
            check_coverage(var, where, out);
        }
    }

    check_universe(config.output_universe, "output", out);
    if (config.output_terms.empty()) {
        out.push_back({Diagnostic::Code::no_output_terms, "output", "no output terms defined"});
    }
    std::set<std::string> output_labels;
    for (std::size_t t = 0; t < config.output_terms.size(); ++t) {
        const Term& term = config.output_terms[t];
        const std::string where = "output." + index_location("terms", t);
        if (!output_labels.insert(term.label).second) {
            out.push_back({Diagnostic::Code::duplicate_term, where,
                           "output term label '" + term.label + "' appears more than once"});
        }
        check_term(term, config.output_universe, where, out);
    }

    if (config.classes.empty()) {
        out.push_back({Diagnostic::Code::no_classes, "classes", "no output classes defined"});
    }
    std::set<std::string> class_names;
    for (std::size_t c = 0; c < config.classes.size(); ++c) {
        if (!class_names.insert(config.classes[c]).second) {
            out.push_back({Diagnostic::Code::duplicate_class, index_location("classes", c),
                           "class '" + config.classes[c] + "' appears more than once"});
        }
    }

    if (config.rules.empty()) {
        out.push_back({Diagnostic::Code::no_rules, "rules", "rule base is empty"});
    }
    std::set<std::string> concluded;
    for (std::size_t r = 0; r < config.rules.size(); ++r) {
        const Rule& rule = config.rules[r];
        const std::string where = index_location("rules", r);
        if (rule.antecedent.empty()) {
            out.push_back({Diagnostic::Code::empty_antecedent, where, "rule has no antecedent clauses"});
        }
        for (const Clause& clause : rule.antecedent) {
            const auto var = std::find_if(config.inputs.begin(), config.inputs.end(),
                                          [&](const LinguisticVariable& v) {
                                              return v.name() == clause.variable;
                                          });
            if (var == config.inputs.end()) {
                out.push_back({Diagnostic::Code::unknown_variable, where,
                               "clause references unknown variable '" + clause.variable + "'"});
            } else if (var->find_term(clause.term) == nullptr) {
                out.push_back({Diagnostic::Code::unknown_term, where,
                               "clause references term '" + clause.term +
                                   "' absent from variable '" + clause.variable + "'"});
            }
        }
        if (class_names.find(rule.consequent_class) == class_names.end()) {
            out.push_back({Diagnostic::Code::unknown_class, where,
                           "consequent references unknown class '" + rule.consequent_class + "'"});
        } else {
            concluded.insert(rule.consequent_class);
        }
        const bool term_known =
            std::any_of(config.output_terms.begin(), config.output_terms.end(),
                        [&](const Term& t) { return t.label == rule.consequent_term; });
        if (!term_known) {
            out.push_back({Diagnostic::Code::unknown_output_term, where,
                           "consequent references unknown output term '" + rule.consequent_term +
                               "'"});
        }
        if (!(rule.weight > 0.0) || rule.weight > 1.0 || std::isnan(rule.weight)) {
            out.push_back({Diagnostic::Code::weight_out_of_range, where,
                           "weight must lie in (0, 1], got " + format_double(rule.weight)});
        }
    }
    for (const std::string& cls : config.classes) {
        if (concluded.find(cls) == concluded.end()) {
            out.push_back({Diagnostic::Code::class_without_rules, "classes",
                           "class '" + cls + "' has no rule concluding it"});
        }
    }

    return out;
}

FuzzySystem FuzzySystem::create(SystemConfig config) {
    auto diagnostics = validate(config);
    if (!diagnostics.empty()) {
        throw ValidationError(std::move(diagnostics));
    }
    return FuzzySystem(std::move(config));
}

std::size_t FuzzySystem::class_index(std::string_view label) const {
    for (std::size_t i = 0; i < cfg_.classes.size(); ++i) {
        if (cfg_.classes[i] == label) {
            return i;
        }
    }
    throw ConfigError("unknown class '" + std::string(label) + "'");
}

std::pair<FuzzifiedInputs, std::vector<std::string>> FuzzySystem::fuzzify(
    std::span<const double> values) const {
    if (values.size() != cfg_.inputs.size()) {
        throw ConfigError("expected " + std::to_string(cfg_.inputs.size()) +
                          " input values, got " + std::to_string(values.size()));
    }
    FuzzifiedInputs fuzzified;
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < cfg_.inputs.size(); ++i) {
        const LinguisticVariable& var = cfg_.inputs[i];
        const Universe& u = var.universe();
        const double tol = 1e-9 * (u.hi - u.lo);
        if (!u.contains(values[i], tol)) {
            warnings.push_back("input '" + var.name() + "' = " + format_double(values[i]) +
                               " outside [" + format_double(u.lo) + ", " + format_double(u.hi) +
                               "]; clamped to " + format_double(u.clamp(values[i])));
        }
        fuzzified.emplace(var.name(), var.fuzzify(values[i]));
    }
    return {std::move(fuzzified), std::move(warnings)};
}

double rule_strength(const Rule& rule, const FuzzifiedInputs& fuzzified) {
    double strength = 1.0;
    for (const Clause& clause : rule.antecedent) {
        const auto var = fuzzified.find(clause.variable);
        if (var == fuzzified.end()) {
            throw ConfigError("rule references unknown variable '" + clause.variable + "'");
        }
        const auto term = var->second.find(clause.term);
        if (term == var->second.end()) {
            throw ConfigError("rule references term '" + clause.term +
                              "' absent from variable '" + clause.variable + "'");
        }
        strength = std::min(strength, term->second);
    }
    return rule.weight * strength;
}

ClassInference FuzzySystem::aggregate_class(std::span<const double> strengths,
                                            std::string_view class_label) const {
    ClassInference result;
    std::vector<std::pair<const MembershipFunction*, double>> clipped;
    for (std::size_t r = 0; r < cfg_.rules.size(); ++r) {
        const Rule& rule = cfg_.rules[r];
        if (rule.consequent_class != class_label || strengths[r] <= 0.0) {
            continue;
        }
        result.fired.push_back({r, strengths[r]});
        const auto term = std::find_if(cfg_.output_terms.begin(), cfg_.output_terms.end(),
                                       [&](const Term& t) { return t.label == rule.consequent_term; });
        clipped.emplace_back(&term->mf, strengths[r]);
    }
    if (clipped.empty()) {
        result.phi = 0.0;  // no evidence for this class
        return result;
    }
    const auto aggregate = [&clipped](double x) {
        double best = 0.0;
        for (const auto& [mf, clip] : clipped) {
            best = std::max(best, std::min(mf->eval(x), clip));
        }
        return best;
    };
    try {
        result.phi = defuzzify_centroid(aggregate, cfg_.output_universe);
    } catch (const EmptyFuzzySetError&) {
        // fired rules whose consequents vanish between grid samples carry no
        // evidence either
        result.phi = 0.0;
    }
    return result;
}

ClassInference FuzzySystem::infer_class(std::span<const double> values,
                                        std::string_view class_label) const {
    static_cast<void>(class_index(class_label));  // reject unknown labels
    auto [fuzzified, warnings] = fuzzify(values);
    std::vector<double> strengths(cfg_.rules.size());
    for (std::size_t r = 0; r < cfg_.rules.size(); ++r) {
        strengths[r] = rule_strength(cfg_.rules[r], fuzzified);
    }
    return aggregate_class(strengths, class_label);
}

InferenceResult FuzzySystem::infer(std::span<const double> values) const {
    auto [fuzzified, warnings] = fuzzify(values);
    std::vector<double> strengths(cfg_.rules.size());
    for (std::size_t r = 0; r < cfg_.rules.size(); ++r) {
        strengths[r] = rule_strength(cfg_.rules[r], fuzzified);
    }
    InferenceResult result;
    result.warnings = std::move(warnings);
    result.per_class.reserve(cfg_.classes.size());
    for (const std::string& cls : cfg_.classes) {
        result.per_class.push_back(aggregate_class(strengths, cls));
    }
    return result;
}

}  // namespace flowfis::fuzzy
