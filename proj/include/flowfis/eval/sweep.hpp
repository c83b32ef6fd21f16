#pragma once

#include <string>
#include <vector>

#include "flowfis/fuzzy/system.hpp"
#include "flowfis/kb/knowledge_base.hpp"

namespace flowfis::eval {

struct Axis {
    double min = 0.0;
    double max = 1.0;
    int steps = 50;  // >= 2

    [[nodiscard]] double value(int i) const {
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
};

/// Flow-pattern map at a fixed angle: cells ordered by (flow, watercut),
/// watercut varying fastest.
struct SweepGrid {
    double angle_deg = 0.0;
    Axis flow;
    Axis watercut;
    std::vector<kb::FlowPattern> cells;  // flow.steps * watercut.steps entries

    [[nodiscard]] kb::FlowPattern at(int flow_i, int wc_i) const {
        return cells[static_cast<std::size_t>(flow_i) * static_cast<std::size_t>(watercut.steps) +
                     static_cast<std::size_t>(wc_i)];
    }
    [[nodiscard]] int count(kb::FlowPattern p) const;
};

/// Throws std::invalid_argument on axes with fewer than 2 steps or an empty
/// range.
SweepGrid run_sweep(const fuzzy::FuzzySystem& system, double angle_deg, Axis flow, Axis watercut);

/// CSV: header `flow_m3d,watercut_frac,pattern`, one row per cell in grid
/// order.
std::string sweep_to_csv(const SweepGrid& grid);

/// Self-contained SVG raster with a legend; cell colors key the four
/// classes and encode exactly the CSV assignments.
std::string sweep_to_svg(const SweepGrid& grid);

}  // namespace flowfis::eval
