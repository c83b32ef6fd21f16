#include "flowfis/eval/sweep.hpp"

#include <sstream>
#include <stdexcept>

#include "flowfis/util.hpp"

namespace flowfis::eval {

using kb::FlowPattern;
using util::format_double;

namespace {

const char* fill_color(FlowPattern p) {
    switch (p) {
        case FlowPattern::water_in_oil: return "#c0392b";
        case FlowPattern::stratified: return "#2980b9";
        case FlowPattern::oil_in_water_and_water: return "#27ae60";
        case FlowPattern::dual_dispersion: return "#f39c12";
    }
    return "#000000";
}

void check_axis(const Axis& axis, const char* name) {
    if (axis.steps < 2) {
        throw std::invalid_argument(std::string(name) + " axis needs at least 2 steps");
    }
    if (!(axis.min < axis.max)) {
        throw std::invalid_argument(std::string(name) + " axis needs min < max");
    }
}

std::string xml_escape(std::string_view text) {
    std::string escaped;
    for (char ch : text) {
        if (ch == '&') {
            escaped += "&amp;";
        } else {
            escaped += ch;
        }
    }
    return escaped;
}

}  // namespace

int SweepGrid::count(FlowPattern p) const {
    int n = 0;
    for (FlowPattern cell : cells) {
        if (cell == p) ++n;
    }
    return n;
}

SweepGrid run_sweep(const fuzzy::FuzzySystem& system, double angle_deg, Axis flow, Axis watercut) {
    check_axis(flow, "flow");
    check_axis(watercut, "watercut");
    SweepGrid grid;
    grid.angle_deg = angle_deg;
    grid.flow = flow;
    grid.watercut = watercut;
    grid.cells.reserve(static_cast<std::size_t>(flow.steps) * static_cast<std::size_t>(watercut.steps));
    for (int fi = 0; fi < flow.steps; ++fi) {
        for (int wi = 0; wi < watercut.steps; ++wi) {
            const kb::OperatingPoint point{angle_deg, flow.value(fi), watercut.value(wi)};
            grid.cells.push_back(kb::classify(system, point).predicted);
        }
    }
    return grid;
}

std::string sweep_to_csv(const SweepGrid& grid) {
    std::ostringstream out;
    out << "flow_m3d,watercut_frac,pattern\n";
    for (int fi = 0; fi < grid.flow.steps; ++fi) {
        for (int wi = 0; wi < grid.watercut.steps; ++wi) {
            out << format_double(grid.flow.value(fi)) << ','
                << format_double(grid.watercut.value(wi)) << ',' << kb::label(grid.at(fi, wi))
                << '\n';
        }
    }
    return out.str();
}

std::string sweep_to_svg(const SweepGrid& grid) {
    constexpr int cell = 10;
    constexpr int margin_left = 70;
    constexpr int margin_bottom = 50;
    constexpr int margin_top = 40;
    constexpr int legend_width = 150;
    const int plot_w = cell * grid.watercut.steps;
    const int plot_h = cell * grid.flow.steps;
    const int width = margin_left + plot_w + legend_width;
    const int height = margin_top + plot_h + margin_bottom;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << margin_left << "\" y=\"24\" font-family=\"sans-serif\" "
        << "font-size=\"14\">flow pattern map, angle " << format_double(grid.angle_deg)
        << " deg</text>\n";

    // cells: x = watercut (left to right), y = flow (bottom to top)
    for (int fi = 0; fi < grid.flow.steps; ++fi) {
        for (int wi = 0; wi < grid.watercut.steps; ++wi) {
            const int x = margin_left + wi * cell;
            const int y = margin_top + (grid.flow.steps - 1 - fi) * cell;
            out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << fill_color(grid.at(fi, wi))
                << "\"/>\n";
        }
    }

    // axis labels
    out << "  <text x=\"" << margin_left << "\" y=\"" << margin_top + plot_h + 20
        << "\" font-family=\"sans-serif\" font-size=\"11\">watercut "
        << format_double(grid.watercut.min) << "</text>\n";
    out << "  <text x=\"" << margin_left + plot_w - 40 << "\" y=\"" << margin_top + plot_h + 20
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(grid.watercut.max)
        << "</text>\n";
    out << "  <text x=\"8\" y=\"" << margin_top + plot_h << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\">flow " << format_double(grid.flow.min) << "</text>\n";
    out << "  <text x=\"8\" y=\"" << margin_top + 10 << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << format_double(grid.flow.max) << "</text>\n";

    // legend
    int ly = margin_top;
    for (FlowPattern p : kb::kPatternOrder) {
        const int lx = margin_left + plot_w + 16;
        out << "  <rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"14\" height=\"14\" fill=\""
            << fill_color(p) << "\"/>\n";
        out << "  <text x=\"" << lx + 20 << "\" y=\"" << ly + 12
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(kb::label(p))
            << "</text>\n";
        ly += 22;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace flowfis::eval
