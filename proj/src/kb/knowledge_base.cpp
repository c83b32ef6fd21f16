#include "flowfis/kb/knowledge_base.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

namespace flowfis::kb {

namespace {

using fuzzy::Clause;
using fuzzy::LinguisticVariable;
using fuzzy::MembershipFunction;
using fuzzy::Rule;
using fuzzy::Term;
using fuzzy::Universe;

constexpr int kResolution = 1001;

std::vector<Term> angle_terms() {
    return {
        {"PS", MembershipFunction::trapezoid(0, 0, 15, 45)},   // near vertical
        {"P", MembershipFunction::trapezoid(35, 45, 70, 87)},  // deviated
        {"PL", MembershipFunction::trapezoid(75, 87, 90, 90)}, // near horizontal
    };
}

std::vector<Term> flow_terms() {
    return {
        {"M", MembershipFunction::trapezoid(100, 100, 175, 325)},
        {"H", MembershipFunction::triangle(200, 350, 500)},
        {"VH", MembershipFunction::trapezoid(350, 500, 600, 600)},
    };
}

std::vector<Term> watercut_terms() {
    return {
        {"VL", MembershipFunction::trapezoid(0, 0, 0.2, 0.35)},
        {"L", MembershipFunction::triangle(0.2, 0.4, 0.55)},
        {"ML", MembershipFunction::triangle(0.4, 0.52, 0.72)},
        {"M", MembershipFunction::triangle(0.65, 0.8, 0.92)},
        {"H", MembershipFunction::trapezoid(0.82, 0.9, 1, 1)},
    };
}

std::vector<Term> output_terms() {
    return {
        {"AWAY", MembershipFunction::trapezoid(0, 0, 0.1, 0.25)},
        {"FAR", MembershipFunction::triangle(0.15, 0.3, 0.45)},
        {"BORDER", MembershipFunction::triangle(0.35, 0.5, 0.65)},
        {"CLOSE", MembershipFunction::triangle(0.55, 0.7, 0.85)},
        {"IN", MembershipFunction::trapezoid(0.75, 0.9, 1, 1)},
    };
}

// The 20-rule base. Broad region rules carry weight 0.7 so that the
// narrower exception rules (weight 1) override them inside their own
// water-cut band; with min/max inference the predicted class is the one
// whose strongest weighted rule wins.
std::vector<Rule> default_rules() {
    const std::string wo = std::string(label(FlowPattern::water_in_oil));
    const std::string st = std::string(label(FlowPattern::stratified));
    const std::string dow = std::string(label(FlowPattern::oil_in_water_and_water));
    const std::string dwo = std::string(label(FlowPattern::dual_dispersion));
    const auto rule = [](std::vector<Clause> antecedent, std::string cls, double weight) {
        return Rule{std::move(antecedent), std::move(cls), "IN", weight};
    };
    const std::string angle{kAngleVar};
    const std::string flow{kFlowVar};
    const std::string wc{kWatercutVar};

    return {
        // Vertical pipe: water-continuous dispersion except at very high
        // flow, where low water cut sustains a W/O emulsion and moderate
        // water cut a dual dispersion.
        rule({{angle, "PS"}, {flow, "M"}}, dow, 1.0),
        rule({{angle, "PS"}, {flow, "H"}}, dow, 1.0),
        rule({{angle, "PS"}, {flow, "VH"}}, dow, 0.55),
        rule({{angle, "PS"}, {flow, "VH"}, {wc, "VL"}}, wo, 1.0),
        rule({{angle, "PS"}, {flow, "VH"}, {wc, "L"}}, dwo, 1.0),
        rule({{angle, "PS"}, {flow, "VH"}, {wc, "ML"}}, dwo, 1.0),
        // Deviated pipe: buoyant slip keeps low flow water-continuous;
        // above that the pattern follows the water cut, emulsion below the
        // inversion band and dual dispersion above it.
        rule({{angle, "P"}, {flow, "M"}}, dow, 1.0),
        rule({{angle, "P"}, {wc, "VL"}}, wo, 0.7),
        rule({{angle, "P"}, {wc, "L"}}, wo, 0.7),
        rule({{angle, "P"}, {wc, "ML"}}, wo, 0.7),
        rule({{angle, "P"}, {flow, "H"}, {wc, "ML"}}, wo, 1.0),
        rule({{angle, "P"}, {wc, "M"}}, dwo, 0.7),
        rule({{angle, "P"}, {wc, "H"}}, dwo, 0.7),
        // Near-horizontal pipe: gravity stratifies low flow outright and
        // moderate flow while the water layer is thin; more water shifts
        // moderate flow through dual dispersion into oil-in-water, and very
        // high flow mirrors the deviated split.
        rule({{angle, "PL"}, {flow, "M"}}, st, 1.0),
        rule({{angle, "PL"}, {flow, "H"}, {wc, "VL"}}, st, 1.0),
        rule({{angle, "PL"}, {flow, "H"}, {wc, "L"}}, dwo, 1.0),
        rule({{angle, "PL"}, {flow, "H"}}, dow, 0.7),
        rule({{angle, "PL"}, {flow, "VH"}}, wo, 0.7),
        rule({{angle, "PL"}, {flow, "VH"}, {wc, "M"}}, dwo, 1.0),
        rule({{angle, "PL"}, {flow, "VH"}, {wc, "H"}}, dwo, 1.0),
    };
}

}  // namespace

fuzzy::FuzzySystem build_default_kb() {
    fuzzy::SystemConfig cfg;
    cfg.inputs = {
        LinguisticVariable(std::string(kAngleVar), Universe{0.0, 90.0, kResolution}, angle_terms()),
        LinguisticVariable(std::string(kFlowVar), Universe{100.0, 600.0, kResolution}, flow_terms()),
        LinguisticVariable(std::string(kWatercutVar), Universe{0.0, 1.0, kResolution},
                           watercut_terms()),
    };
    cfg.output_universe = Universe{0.0, 1.0, kResolution};
    cfg.output_terms = output_terms();
    cfg.classes.reserve(kPatternOrder.size());
    for (FlowPattern p : kPatternOrder) {
        cfg.classes.emplace_back(label(p));
    }
    cfg.rules = default_rules();
    return fuzzy::FuzzySystem::create(std::move(cfg));
}

ClassificationResult classify(const fuzzy::FuzzySystem& system, const OperatingPoint& point) {
    std::vector<double> values(system.inputs().size());
    for (std::size_t i = 0; i < system.inputs().size(); ++i) {
        const std::string& name = system.inputs()[i].name();
        if (name == kAngleVar) {
            values[i] = point.angle_deg;
        } else if (name == kFlowVar) {
            values[i] = point.flow_m3d;
        } else if (name == kWatercutVar) {
            values[i] = point.watercut;
        } else {
            throw fuzzy::ConfigError("classification requires inputs named 'angle', 'flow', "
                                     "'watercut'; knowledge base declares '" +
                                     name + "'");
        }
    }
    const fuzzy::InferenceResult inference = system.infer(values);

    ClassificationResult result;
    result.warnings = inference.warnings;
    for (FlowPattern p : kPatternOrder) {
        const std::size_t ci = system.class_index(label(p));
        result.phi[pattern_index(p)] = inference.per_class[ci].phi;
        result.fired[pattern_index(p)] = inference.per_class[ci].fired;
    }
    // argmax with ties resolved toward the earlier class in kPatternOrder
    result.predicted = kPatternOrder.front();
    double best = result.phi.front();
    for (FlowPattern p : kPatternOrder) {
        if (result.phi_of(p) > best) {
            best = result.phi_of(p);
            result.predicted = p;
        }
    }
    return result;
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw KbParseError("knowledge base: " + where + ": " + what);
}

const json& expect(const json& node, const char* key, const std::string& where) {
    if (!node.is_object() || !node.contains(key)) {
        fail(where, std::string("missing key '") + key + "'");
    }
    return node.at(key);
}

double expect_number(const json& node, const char* key, const std::string& where) {
    const json& value = expect(node, key, where);
    if (!value.is_number()) {
        fail(where + "." + key, "expected a number");
    }
    return value.get<double>();
}

std::string expect_string(const json& node, const char* key, const std::string& where) {
    const json& value = expect(node, key, where);
    if (!value.is_string()) {
        fail(where + "." + key, "expected a string");
    }
    return value.get<std::string>();
}

const json& expect_array(const json& node, const char* key, const std::string& where) {
    const json& value = expect(node, key, where);
    if (!value.is_array()) {
        fail(where + "." + key, "expected an array");
    }
    return value;
}

MembershipFunction parse_mf(const json& node, const std::string& where) {
    const std::string kind = expect_string(node, "kind", where);
    const json& pts = expect_array(node, "breakpoints", where);
    std::vector<double> b;
    for (const json& p : pts) {
        if (!p.is_number()) {
            fail(where + ".breakpoints", "expected numbers");
        }
        b.push_back(p.get<double>());
    }
    if (kind == "triangle") {
        if (b.size() != 3) {
            fail(where, "triangle needs 3 breakpoints, got " + std::to_string(b.size()));
        }
        return MembershipFunction::triangle(b[0], b[1], b[2]);
    }
    if (kind == "trapezoid") {
        if (b.size() != 4) {
            fail(where, "trapezoid needs 4 breakpoints, got " + std::to_string(b.size()));
        }
        return MembershipFunction::trapezoid(b[0], b[1], b[2], b[3]);
    }
    fail(where + ".kind", "unknown membership kind '" + kind + "'");
}

std::vector<Term> parse_terms(const json& node, const std::string& where) {
    const json& arr = expect_array(node, "terms", where);
    std::vector<Term> terms;
    for (std::size_t t = 0; t < arr.size(); ++t) {
        const std::string term_where = where + ".terms[" + std::to_string(t) + "]";
        terms.push_back(Term{expect_string(arr[t], "label", term_where),
                             parse_mf(arr[t], term_where)});
    }
    return terms;
}

Universe parse_universe(const json& node, const std::string& where) {
    Universe u;
    u.lo = expect_number(node, "lo", where);
    u.hi = expect_number(node, "hi", where);
    u.resolution = kResolution;
    if (node.contains("resolution")) {
        const json& r = node.at("resolution");
        if (!r.is_number_integer()) {
            fail(where + ".resolution", "expected an integer");
        }
        u.resolution = r.get<int>();
    }
    return u;
}

ordered_json term_to_json(const Term& term) {
    ordered_json node;
    node["label"] = term.label;
    node["kind"] = term.mf.kind() == fuzzy::MfKind::triangle ? "triangle" : "trapezoid";
    node["breakpoints"] =
        std::vector<double>(term.mf.breakpoints().begin(), term.mf.breakpoints().end());
    return node;
}

}  // namespace

fuzzy::SystemConfig kb_config_from_json(const json& doc) {
    if (!doc.is_object()) {
        fail("$", "document root must be an object");
    }
    const json& version = expect(doc, "version", "$");
    if (!version.is_number_integer() || version.get<int>() != 1) {
        fail("$.version", "unsupported format version (expected 1)");
    }

    fuzzy::SystemConfig cfg;
    const json& inputs = expect_array(doc, "inputs", "$");
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const std::string where = "inputs[" + std::to_string(i) + "]";
        cfg.inputs.emplace_back(expect_string(inputs[i], "name", where),
                                parse_universe(inputs[i], where), parse_terms(inputs[i], where));
    }

    const json& output = expect(doc, "output", "$");
    cfg.output_universe = parse_universe(output, "output");
    cfg.output_terms = parse_terms(output, "output");

    for (const json& cls : expect_array(doc, "classes", "$")) {
        if (!cls.is_string()) {
            fail("classes", "expected strings");
        }
        cfg.classes.push_back(cls.get<std::string>());
    }

    const json& rules = expect_array(doc, "rules", "$");
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const std::string where = "rules[" + std::to_string(r) + "]";
        Rule rule;
        const json& clauses = expect_array(rules[r], "if", where);
        for (std::size_t c = 0; c < clauses.size(); ++c) {
            const std::string clause_where = where + ".if[" + std::to_string(c) + "]";
            rule.antecedent.push_back(Clause{expect_string(clauses[c], "var", clause_where),
                                             expect_string(clauses[c], "is", clause_where)});
        }
        const json& consequent = expect(rules[r], "then", where);
        rule.consequent_class = expect_string(consequent, "class", where + ".then");
        rule.consequent_term = expect_string(consequent, "is", where + ".then");
        rule.weight = 1.0;
        if (rules[r].contains("weight")) {
            if (!rules[r].at("weight").is_number()) {
                fail(where + ".weight", "expected a number");
            }
            rule.weight = rules[r].at("weight").get<double>();
        }
        cfg.rules.push_back(std::move(rule));
    }
    return cfg;
}

ordered_json kb_to_json(const fuzzy::FuzzySystem& system) {
    ordered_json doc;
    doc["version"] = 1;
    doc["inputs"] = ordered_json::array();
    for (const LinguisticVariable& var : system.inputs()) {
        ordered_json node;
        node["name"] = var.name();
        node["lo"] = var.universe().lo;
        node["hi"] = var.universe().hi;
        node["resolution"] = var.universe().resolution;
        node["terms"] = ordered_json::array();
        for (const Term& term : var.terms()) {
            node["terms"].push_back(term_to_json(term));
        }
        doc["inputs"].push_back(std::move(node));
    }
    ordered_json output;
    output["lo"] = system.output_universe().lo;
    output["hi"] = system.output_universe().hi;
    output["resolution"] = system.output_universe().resolution;
    output["terms"] = ordered_json::array();
    for (const Term& term : system.output_terms()) {
        output["terms"].push_back(term_to_json(term));
    }
    doc["output"] = std::move(output);
    doc["classes"] = system.classes();
    doc["rules"] = ordered_json::array();
    for (const Rule& rule : system.rules()) {
        ordered_json node;
        node["if"] = ordered_json::array();
        for (const Clause& clause : rule.antecedent) {
            node["if"].push_back({{"var", clause.variable}, {"is", clause.term}});
        }
        node["then"] = {{"class", rule.consequent_class}, {"is", rule.consequent_term}};
        node["weight"] = rule.weight;
        doc["rules"].push_back(std::move(node));
    }
    return doc;
}

fuzzy::FuzzySystem load_kb(const json& doc) {
    return fuzzy::FuzzySystem::create(kb_config_from_json(doc));
}

fuzzy::FuzzySystem load_kb_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw KbParseError("cannot open knowledge base file '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw KbParseError("knowledge base '" + path.string() + "': " + e.what());
    }
    return load_kb(doc);
}

std::string kb_to_string(const fuzzy::FuzzySystem& system) {
    return kb_to_json(system).dump(2) + "\n";
}

void save_kb_file(const fuzzy::FuzzySystem& system, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw KbParseError("cannot write knowledge base file '" + path.string() + "'");
    }
    out << kb_to_string(system);
}

}  // namespace flowfis::kb
