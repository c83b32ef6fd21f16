#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flowfis/kb/flow_pattern.hpp"

namespace flowfis::data {

enum class Provenance {
    paper_table,    // labeled test point from the published result tables
    reconstructed,  // label inferred from the reported regime layout
};

/// One labeled design point of the flow-loop experiment.
struct ExperimentRecord {
    double angle_deg = 0.0;
    double flow_m3d = 0.0;
    double watercut = 0.0;
    kb::FlowPattern pattern = kb::FlowPattern::water_in_oil;
    Provenance provenance = Provenance::reconstructed;

    bool operator==(const ExperimentRecord&) const = default;
    [[nodiscard]] bool same_point(const ExperimentRecord& other, double tol = 1e-9) const;
};

/// Metadata of the experimental fluids and pipe; informational only.
struct FluidProperties {
    double oil_density_g_cm3 = 0.8263;
    double oil_viscosity_mpa_s = 2.92;
    double water_density_g_cm3 = 0.9884;
    double water_viscosity_mpa_s = 1.16;
    double pipe_inner_diameter_mm = 159.0;
};

inline constexpr FluidProperties kExperimentFluids{};

/// Raised on malformed CSV input; carries the 1-based line number.
class CsvError : public std::runtime_error {
  public:
    CsvError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

inline constexpr std::string_view kCsvHeader = "angle_deg,flow_m3d,watercut_frac,pattern";

/// Parses the CSV format (header above, dot decimals, LF or CRLF).
/// Parsed records carry Provenance::reconstructed.
std::vector<ExperimentRecord> parse_csv(std::string_view text);
std::string serialize_csv(std::span<const ExperimentRecord> records);

/// The embedded 60-point dataset: the full 4 angles x 3 flows x 5 water
/// cuts design grid. 18 records carry Provenance::paper_table (the
/// published test points); the remaining 42 are reconstructed labels.
const std::vector<ExperimentRecord>& embedded_dataset();

/// The 18 published test points, in publication order.
const std::vector<ExperimentRecord>& paper_test_points();

struct SplitSpec {
    enum class Scheme { paper, seeded_random };
    Scheme scheme = Scheme::paper;
    double test_fraction = 0.3;  // seeded_random only
    std::uint64_t seed = 1;      // seeded_random only
};

struct Split {
    std::vector<ExperimentRecord> train;
    std::vector<ExperimentRecord> test;
};

/// paper: test = the 18 published points (matched field-by-field; throws
/// std::invalid_argument when any is missing), train = the rest.
/// seeded_random: deterministic shuffle split; both sides must be non-empty.
Split split(std::span<const ExperimentRecord> records, const SplitSpec& spec);

}  // namespace flowfis::data
