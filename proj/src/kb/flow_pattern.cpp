#include "flowfis/kb/flow_pattern.hpp"

namespace flowfis::kb {

std::optional<FlowPattern> pattern_from_code(int code) {
    if (code < 1 || code > 4) {
        return std::nullopt;
    }
    return static_cast<FlowPattern>(code);
}

std::string_view label(FlowPattern p) {
    switch (p) {
        case FlowPattern::water_in_oil: return "W/O";
        case FlowPattern::stratified: return "ST";
        case FlowPattern::oil_in_water_and_water: return "DO/W&W";
        case FlowPattern::dual_dispersion: return "DW/O&O/W";
    }
    return "?";
}

std::optional<FlowPattern> pattern_from_label(std::string_view text) {
    for (FlowPattern p : kPatternOrder) {
        if (label(p) == text) {
            return p;
        }
    }
    return std::nullopt;
}

}  // namespace flowfis::kb
