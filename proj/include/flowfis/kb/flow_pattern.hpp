#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace flowfis::kb {

/// The four oil-water flow-pattern classes. ST merges smooth stratified
/// flow and stratified flow with interface mixing. Enumerator values are
/// the numeric codes the neural baseline regresses.
enum class FlowPattern : int {
    water_in_oil = 1,            // W/O: water-in-oil emulsion
    stratified = 2,              // ST: separated (stratified) flow
    oil_in_water_and_water = 3,  // DO/W&W: oil-in-water dispersion over free water
    dual_dispersion = 4,         // DW/O&O/W: coexisting W/O and O/W dispersions
};

/// Class order used everywhere (iteration, confusion matrices, argmax
/// tie-breaking).
inline constexpr std::array<FlowPattern, 4> kPatternOrder = {
    FlowPattern::water_in_oil,
    FlowPattern::stratified,
    FlowPattern::oil_in_water_and_water,
    FlowPattern::dual_dispersion,
};

constexpr int code(FlowPattern p) { return static_cast<int>(p); }

constexpr std::size_t pattern_index(FlowPattern p) {
    return static_cast<std::size_t>(code(p) - 1);
}

std::optional<FlowPattern> pattern_from_code(int code);
std::string_view label(FlowPattern p);
std::optional<FlowPattern> pattern_from_label(std::string_view text);

}  // namespace flowfis::kb
