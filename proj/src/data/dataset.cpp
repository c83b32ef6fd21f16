#include "flowfis/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "flowfis/util.hpp"

namespace flowfis::data {

namespace {

using kb::FlowPattern;

constexpr FlowPattern WO = FlowPattern::water_in_oil;
constexpr FlowPattern ST = FlowPattern::stratified;
constexpr FlowPattern DOW = FlowPattern::oil_in_water_and_water;
constexpr FlowPattern DWO = FlowPattern::dual_dispersion;

struct GridRow {
    double angle, flow, wc;
    FlowPattern pattern;
    bool paper;
};

// Full design grid in (angle, flow, watercut) order. The `paper` flag marks
// the 18 published test points; the other labels are reconstructed from the
// reported regime layout (no stratified flow at 60 degrees; stratified at
// 85/90 degrees and low flow; emulsion at high flow and low water cut).
constexpr GridRow kGrid[] = {
    {0, 100, 0.2, DOW, false},  {0, 100, 0.4, DOW, false},  {0, 100, 0.6, DOW, false},
    {0, 100, 0.8, DOW, true},   {0, 100, 0.9, DOW, true},
    {0, 300, 0.2, DOW, true},   {0, 300, 0.4, DOW, true},   {0, 300, 0.6, DOW, false},
    {0, 300, 0.8, DOW, false},  {0, 300, 0.9, DOW, false},
    {0, 600, 0.2, WO, true},    {0, 600, 0.4, DWO, false},  {0, 600, 0.6, DWO, false},
    {0, 600, 0.8, DOW, false},  {0, 600, 0.9, DOW, false},

    {60, 100, 0.2, DOW, true},  {60, 100, 0.4, DOW, true},  {60, 100, 0.6, DOW, false},
    {60, 100, 0.8, DOW, false}, {60, 100, 0.9, DOW, false},
    {60, 300, 0.2, WO, false},  {60, 300, 0.4, WO, false},  {60, 300, 0.6, WO, true},
    {60, 300, 0.8, DWO, true},  {60, 300, 0.9, DWO, false},
    {60, 600, 0.2, WO, false},  {60, 600, 0.4, WO, false},  {60, 600, 0.6, WO, false},
    {60, 600, 0.8, DWO, false}, {60, 600, 0.9, DWO, true},

    {85, 100, 0.2, ST, true},   {85, 100, 0.4, ST, false},  {85, 100, 0.6, ST, false},
    {85, 100, 0.8, ST, false},  {85, 100, 0.9, ST, true},
    {85, 300, 0.2, ST, false},  {85, 300, 0.4, DWO, false}, {85, 300, 0.6, DOW, false},
    {85, 300, 0.8, DOW, true},  {85, 300, 0.9, DOW, true},
    {85, 600, 0.2, WO, false},  {85, 600, 0.4, WO, false},  {85, 600, 0.6, WO, true},
    {85, 600, 0.8, DWO, false}, {85, 600, 0.9, DWO, false},

    {90, 100, 0.2, ST, false},  {90, 100, 0.4, ST, false},  {90, 100, 0.6, ST, false},
    {90, 100, 0.8, ST, true},   {90, 100, 0.9, ST, false},
    {90, 300, 0.2, ST, false},  {90, 300, 0.4, DWO, true},  {90, 300, 0.6, DOW, false},
    {90, 300, 0.8, DOW, false}, {90, 300, 0.9, DOW, false},
    {90, 600, 0.2, WO, false},  {90, 600, 0.4, WO, false},  {90, 600, 0.6, WO, false},
    {90, 600, 0.8, DWO, true},  {90, 600, 0.9, DWO, false},
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view field, std::size_t line, const char* column) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw CsvError(line, std::string("cannot parse ") + column + " value '" +
                                 std::string(field) + "'");
    }
    return value;
}

void check_range(double value, double lo, double hi, std::size_t line, const char* column) {
    if (std::isnan(value) || value < lo || value > hi) {
        throw CsvError(line, std::string(column) + " value " + util::format_double(value) +
                                 " outside [" + util::format_double(lo) + ", " +
                                 util::format_double(hi) + "]");
    }
}

}  // namespace

bool ExperimentRecord::same_point(const ExperimentRecord& other, double tol) const {
    return std::abs(angle_deg - other.angle_deg) <= tol &&
           std::abs(flow_m3d - other.flow_m3d) <= tol && std::abs(watercut - other.watercut) <= tol;
}

std::vector<ExperimentRecord> parse_csv(std::string_view text) {
    std::vector<ExperimentRecord> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        line = trim(line);
        if (line_no == 1) {
            if (line != kCsvHeader) {
                throw CsvError(1, "expected header '" + std::string(kCsvHeader) + "', got '" +
                                      std::string(line) + "'");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::array<std::string_view, 4> fields;
        std::size_t start = 0;
        for (int f = 0; f < 4; ++f) {
            const std::size_t comma = line.find(',', start);
            const bool last = f == 3;
            if (!last && comma == std::string_view::npos) {
                throw CsvError(line_no, "expected 4 comma-separated fields");
            }
            fields[f] = trim(line.substr(start, last ? line.size() - start : comma - start));
            start = comma + 1;
            if (last && comma != std::string_view::npos) {
                throw CsvError(line_no, "expected 4 comma-separated fields");
            }
        }
        ExperimentRecord rec;
        rec.angle_deg = parse_number(fields[0], line_no, "angle_deg");
        rec.flow_m3d = parse_number(fields[1], line_no, "flow_m3d");
        rec.watercut = parse_number(fields[2], line_no, "watercut_frac");
        check_range(rec.angle_deg, 0.0, 90.0, line_no, "angle_deg");
        check_range(rec.flow_m3d, 100.0, 600.0, line_no, "flow_m3d");
        check_range(rec.watercut, 0.0, 1.0, line_no, "watercut_frac");
        const auto pattern = kb::pattern_from_label(fields[3]);
        if (!pattern) {
            throw CsvError(line_no, "unknown pattern label '" + std::string(fields[3]) + "'");
        }
        rec.pattern = *pattern;
        rec.provenance = Provenance::reconstructed;
        records.push_back(rec);
    }
    return records;
}

std::string serialize_csv(std::span<const ExperimentRecord> records) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const ExperimentRecord& rec : records) {
        out << util::format_double(rec.angle_deg) << ',' << util::format_double(rec.flow_m3d)
            << ',' << util::format_double(rec.watercut) << ',' << kb::label(rec.pattern) << '\n';
    }
    return out.str();
}

const std::vector<ExperimentRecord>& embedded_dataset() {
    static const std::vector<ExperimentRecord> dataset = [] {
        std::vector<ExperimentRecord> records;
        records.reserve(std::size(kGrid));
        for (const GridRow& row : kGrid) {
            records.push_back({row.angle, row.flow, row.wc, row.pattern,
                               row.paper ? Provenance::paper_table : Provenance::reconstructed});
        }
        return records;
    }();
    return dataset;
}

const std::vector<ExperimentRecord>& paper_test_points() {
    static const std::vector<ExperimentRecord> points = [] {
        std::vector<ExperimentRecord> out;
        for (const ExperimentRecord& rec : embedded_dataset()) {
            if (rec.provenance == Provenance::paper_table) {
                out.push_back(rec);
            }
        }
        return out;
    }();
    return points;
}

namespace {

// splitmix64; keeps the shuffle deterministic across standard libraries.
struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::size_t below(std::size_t bound) { return static_cast<std::size_t>(next() % bound); }
};

}  // namespace

Split split(std::span<const ExperimentRecord> records, const SplitSpec& spec) {
    if (records.empty()) {
        throw std::invalid_argument("cannot split an empty record list");
    }
    Split result;
    if (spec.scheme == SplitSpec::Scheme::paper) {
        const auto& canonical = paper_test_points();
        std::vector<bool> is_test(records.size(), false);
        for (const ExperimentRecord& want : canonical) {
            bool found = false;
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (records[i].same_point(want) && records[i].pattern == want.pattern) {
                    is_test[i] = true;
                    found = true;
                }
            }
            if (!found) {
                std::ostringstream os;
                os << "paper split requires the published test point (" << want.angle_deg << ", "
                   << want.flow_m3d << ", " << want.watercut << ", " << kb::label(want.pattern)
                   << "), which is missing from the dataset";
                throw std::invalid_argument(os.str());
            }
        }
        for (std::size_t i = 0; i < records.size(); ++i) {
            (is_test[i] ? result.test : result.train).push_back(records[i]);
        }
        return result;
    }

    if (!(spec.test_fraction > 0.0) || !(spec.test_fraction < 1.0)) {
        throw std::invalid_argument("test fraction must lie strictly between 0 and 1");
    }
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng{spec.seed};
    for (std::size_t i = order.size(); i > 1; --i) {  // Fisher-Yates
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    const auto test_count =
        static_cast<std::size_t>(std::lround(spec.test_fraction * static_cast<double>(records.size())));
    if (test_count == 0 || test_count >= records.size()) {
        throw std::invalid_argument("split would leave an empty train or test side");
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < test_count ? result.test : result.train).push_back(records[order[i]]);
    }
    return result;
}

}  // namespace flowfis::data
