#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "flowfis/fuzzy/system.hpp"
#include "flowfis/kb/flow_pattern.hpp"

namespace flowfis::kb {

/// One crisp operating condition: pipe deviation from vertical in degrees,
/// total liquid flow in m3/d, and water cut as a fraction of total flow.
struct OperatingPoint {
    double angle_deg = 0.0;
    double flow_m3d = 0.0;
    double watercut = 0.0;

    bool operator==(const OperatingPoint&) const = default;
};

/// Per-class confidences and the winning pattern. All four arrays are
/// indexed by kPatternOrder; ties go to the earlier class in that order.
struct ClassificationResult {
    std::array<double, 4> phi{};
    FlowPattern predicted = FlowPattern::water_in_oil;
    std::array<std::vector<fuzzy::FiredRule>, 4> fired;
    std::vector<std::string> warnings;

    [[nodiscard]] double phi_of(FlowPattern p) const { return phi[pattern_index(p)]; }
    [[nodiscard]] const std::vector<fuzzy::FiredRule>& fired_of(FlowPattern p) const {
        return fired[pattern_index(p)];
    }
};

/// Input variable names the classifier expects in a knowledge base.
inline constexpr std::string_view kAngleVar = "angle";
inline constexpr std::string_view kFlowVar = "flow";
inline constexpr std::string_view kWatercutVar = "watercut";

/// The shipped oil-water knowledge base: angle {PS, P, PL} on [0, 90],
/// flow {M, H, VH} on [100, 600], water cut {VL, L, ML, M, H} on [0, 1],
/// output family {AWAY, FAR, BORDER, CLOSE, IN} on [0, 1], the four flow
/// pattern classes, and 20 rules (each concluding "<class> is IN").
fuzzy::FuzzySystem build_default_kb();

/// Runs inference for all four classes and picks the argmax.
ClassificationResult classify(const fuzzy::FuzzySystem& system, const OperatingPoint& point);

/// Raised on malformed knowledge-base documents; the message names the
/// offending location.
struct KbParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Document schema (JSON): top-level keys `version`, `inputs[]` (name, lo,
/// hi, optional resolution, terms[] with label/kind/breakpoints), `output`
/// (lo, hi, optional resolution, terms[]), `classes[]`, `rules[]` (if[]
/// clauses var/is, then class/is, optional weight).
fuzzy::SystemConfig kb_config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json kb_to_json(const fuzzy::FuzzySystem& system);

/// Parse + validate. Throws KbParseError on malformed documents and
/// fuzzy::ValidationError when the parsed system is rejected.
fuzzy::FuzzySystem load_kb(const nlohmann::json& doc);
fuzzy::FuzzySystem load_kb_file(const std::filesystem::path& path);
void save_kb_file(const fuzzy::FuzzySystem& system, const std::filesystem::path& path);
std::string kb_to_string(const fuzzy::FuzzySystem& system);

}  // namespace flowfis::kb
