// Acceptance suite: exercises every shipped guarantee end to end and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "flowfis/bp/network.hpp"
#include "flowfis/bp/rprop.hpp"
#include "flowfis/cli/cli.hpp"
#include "flowfis/data/dataset.hpp"
#include "flowfis/eval/evaluation.hpp"
#include "flowfis/eval/sweep.hpp"
#include "flowfis/kb/knowledge_base.hpp"

using namespace flowfis;
using kb::FlowPattern;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int index, bool passed, const std::string& detail) {
    std::cout << (passed ? "[PASS]" : "[FAIL]") << " criterion " << index << ": " << detail
              << '\n';
    if (!passed) {
        ++failures;
    }
}

double elapsed_ms(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

struct TestRng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    int below(int bound) { return static_cast<int>(next() % static_cast<std::uint64_t>(bound)); }
};

int run_cli_line(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"flowfis"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 1. On the 18 published test points the shipped KB matches the actual
//    pattern for at least 17, in under a second.
void criterion_1_table_reproduction(const fuzzy::FuzzySystem& system) {
    const auto start = std::chrono::steady_clock::now();
    int correct = 0;
    for (const data::ExperimentRecord& rec : data::paper_test_points()) {
        const auto result = kb::classify(system, {rec.angle_deg, rec.flow_m3d, rec.watercut});
        correct += result.predicted == rec.pattern ? 1 : 0;
    }
    const double ms = elapsed_ms(start);
    std::ostringstream detail;
    detail << "published test table reproduced at " << correct << "/18 (need >= 17) in " << ms
           << " ms (need < 1000)";
    report(1, correct >= 17 && ms < 1000.0, detail.str());
}

// 2. The worked example (45 deg, 350 m3/d, 0.5) classifies as W/O with
//    phi >= 0.9, strictly the maximum of the four classes.
void criterion_2_worked_example(const fuzzy::FuzzySystem& system) {
    const kb::ClassificationResult result = kb::classify(system, {45.0, 350.0, 0.5});
    const double phi_wo = result.phi_of(FlowPattern::water_in_oil);
    bool strictly_max = true;
    for (FlowPattern p : kb::kPatternOrder) {
        if (p != FlowPattern::water_in_oil && result.phi_of(p) >= phi_wo) {
            strictly_max = false;
        }
    }
    std::ostringstream detail;
    detail << "worked example predicts " << kb::label(result.predicted) << " with phi_W/O = "
           << phi_wo << " (need >= 0.9 and strictly maximal)";
    report(2, result.predicted == FlowPattern::water_in_oil && phi_wo >= 0.9 && strictly_max,
           detail.str());
}

// 3. Across 10 training seeds the BP baseline's median test accuracy does
//    not beat the FIS, lands in [0.55, 1.0], and the whole comparison runs
//    in under 10 seconds.
void criterion_3_fis_vs_bp(const fuzzy::FuzzySystem& system) {
    const auto start = std::chrono::steady_clock::now();
    const data::Split split = data::split(data::embedded_dataset(), {});
    const double fis_accuracy = eval::evaluate(system, split.test).fis_accuracy();

    std::vector<double> accuracies;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        bp::TrainConfig config;
        config.seed = seed;
        const bp::TrainedModel model = bp::train(config, split.train);
        accuracies.push_back(*eval::evaluate(system, split.test, &model).bp_accuracy());
    }
    std::sort(accuracies.begin(), accuracies.end());
    const double median = 0.5 * (accuracies[4] + accuracies[5]);
    const double ms = elapsed_ms(start);
    std::ostringstream detail;
    detail << "median BP accuracy over 10 seeds = " << median << " (need in [0.55, 1.0]), FIS = "
           << fis_accuracy << " (need >= median), total " << ms << " ms (need < 10000)";
    report(3, median <= fis_accuracy && median >= 0.55 && median <= 1.0 && ms < 10000.0,
           detail.str());
}

// 4. Regime structure: no stratified cell anywhere in a 50x50 sweep at 60
//    degrees; at least one stratified cell at 100 m3/d for 85 and 90.
void criterion_4_regime_properties(const fuzzy::FuzzySystem& system) {
    const eval::SweepGrid deviated = eval::run_sweep(system, 60.0, {100, 600, 50}, {0, 1, 50});
    const int stratified_60 = deviated.count(FlowPattern::stratified);

    int low_flow_st_85 = 0;
    int low_flow_st_90 = 0;
    for (double angle : {85.0, 90.0}) {
        const eval::SweepGrid grid = eval::run_sweep(system, angle, {100, 600, 50}, {0, 1, 50});
        int count = 0;
        for (int wi = 0; wi < 50; ++wi) {
            count += grid.at(0, wi) == FlowPattern::stratified ? 1 : 0;  // flow row 100 m3/d
        }
        (angle == 85.0 ? low_flow_st_85 : low_flow_st_90) = count;
    }
    std::ostringstream detail;
    detail << "sweep at 60 deg has " << stratified_60 << " ST cells (need 0); flow=100 column has "
           << low_flow_st_85 << " (85 deg) and " << low_flow_st_90
           << " (90 deg) ST cells (need >= 1 each)";
    report(4, stratified_60 == 0 && low_flow_st_85 >= 1 && low_flow_st_90 >= 1, detail.str());
}

// 5. Analytic backprop gradients match central finite differences
//    (step 1e-5) to a relative error below 1e-6 on 10 random draws.
void criterion_5_gradient_oracle() {
    TestRng rng{31415};
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        bp::NetworkParams params = bp::init_network(7000 + static_cast<std::uint64_t>(trial),
                                                    4 + trial % 3, 3 + trial % 2);
        std::vector<bp::Sample> batch(5 + trial % 4);
        for (bp::Sample& s : batch) {
            s.x = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            s.target = rng.uniform(1, 4);
        }
        const bp::NetworkParams analytic = bp::gradients(params, batch);

        const double h = 1e-5;
        double diff2 = 0.0;
        double norm2 = 0.0;
        const auto probe = [&](double& scalar, double analytic_value) {
            const double saved = scalar;
            scalar = saved + h;
            const double up = bp::batch_mse(params, batch);
            scalar = saved - h;
            const double down = bp::batch_mse(params, batch);
            scalar = saved;
            const double numeric = (up - down) / (2.0 * h);
            diff2 += (analytic_value - numeric) * (analytic_value - numeric);
            norm2 += std::max(analytic_value * analytic_value, numeric * numeric);
        };
        for (int l = 0; l < 3; ++l) {
            for (std::size_t i = 0; i < params.weights[l].a.size(); ++i) {
                probe(params.weights[l].a[i], analytic.weights[l].a[i]);
            }
            for (std::size_t i = 0; i < params.biases[l].size(); ++i) {
                probe(params.biases[l][i], analytic.biases[l][i]);
            }
        }
        worst = std::max(worst, std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-300));
    }
    std::ostringstream detail;
    detail << "max relative gradient error vs central differences = " << worst
           << " (need < 1e-6)";
    report(5, worst < 1e-6, detail.str());
}

// 6. The centroid defuzzifier agrees with an independent brute-force sum to
//    1e-12 on 100 random clipped/aggregated sets, and symmetric sets
//    defuzzify to their center within one grid step.
void criterion_6_centroid_oracle() {
    TestRng rng{271828};
    const fuzzy::Universe unit{0.0, 1.0, 1001};
    double worst = 0.0;
    bool symmetric_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<fuzzy::ClippedSet> sets;
        const int n = 1 + rng.below(3);
        for (int k = 0; k < n; ++k) {
            const double a = rng.uniform(0.0, 0.55);
            const double b = a + rng.uniform(0.02, 0.3);
            const double c = b + rng.uniform(0.02, 0.3);
            const double d = c + rng.uniform(0.02, 0.3);
            sets.push_back({rng.below(2) == 0 ? fuzzy::MembershipFunction::triangle(a, b, c)
                                              : fuzzy::MembershipFunction::trapezoid(a, b, c, d),
                            rng.uniform(0.05, 1.0)});
        }
        const auto aggregate = [&sets](double x) {
            double best = 0.0;
            for (const auto& s : sets) best = std::max(best, s.eval(x));
            return best;
        };
        const double got = fuzzy::defuzzify_centroid(aggregate, unit);
        // brute force: plain discrete sums, reversed order
        long double mass = 0.0L, moment = 0.0L;
        for (int i = unit.resolution - 1; i >= 0; --i) {
            const double x = unit.sample(i);
            const double m = aggregate(x);
            mass += m;
            moment += static_cast<long double>(x) * m;
        }
        worst = std::max(worst, std::abs(got - static_cast<double>(moment / mass)));

        const double m = rng.uniform(0.25, 0.75);
        const double w = rng.uniform(0.05, 0.2);
        const fuzzy::ClippedSet symmetric{fuzzy::MembershipFunction::triangle(m - w, m, m + w),
                                          rng.uniform(0.1, 1.0)};
        const double center =
            fuzzy::defuzzify_centroid([&](double x) { return symmetric.eval(x); }, unit);
        symmetric_ok = symmetric_ok && std::abs(center - m) < unit.step();
    }
    std::ostringstream detail;
    detail << "worst centroid deviation vs brute force = " << worst
           << " (need <= 1e-12); symmetric sets centered within one step: "
           << (symmetric_ok ? "yes" : "no");
    report(6, worst <= 1e-12 && symmetric_ok, detail.str());
}

// 7. Identical flags give byte-identical outputs: evaluate reports and
//    trained model files.
void criterion_7_determinism() {
    const fs::path dir = fs::temp_directory_path();
    const fs::path report_a = dir / "flowfis_acc_report_a.json";
    const fs::path report_b = dir / "flowfis_acc_report_b.json";
    const fs::path model_a = dir / "flowfis_acc_model_a.json";
    const fs::path model_b = dir / "flowfis_acc_model_b.json";

    bool ok = true;
    ok &= run_cli_line({"evaluate", "--seed", "42", "--out", report_a.string()}) == 0;
    ok &= run_cli_line({"evaluate", "--seed", "42", "--out", report_b.string()}) == 0;
    const bool reports_equal = slurp(report_a) == slurp(report_b);
    ok &= run_cli_line({"train-bp", "--seed", "42", "--out", model_a.string()}) == 0;
    ok &= run_cli_line({"train-bp", "--seed", "42", "--out", model_b.string()}) == 0;
    const bool models_equal = slurp(model_a) == slurp(model_b);
    std::ostringstream detail;
    detail << "repeated runs byte-identical: evaluate reports "
           << (reports_equal ? "yes" : "no") << ", model files "
           << (models_equal ? "yes" : "no");
    report(7, ok && reports_equal && models_equal, detail.str());
}

// 8. Knowledge base hygiene: zero diagnostics, exactly 20 rules, 3+3+5
//    input terms, 5 output terms.
void criterion_8_kb_hygiene(const fuzzy::FuzzySystem& system) {
    const auto diagnostics = fuzzy::FuzzySystem::validate(system.config());
    const bool counts_ok = system.inputs().size() == 3 && system.inputs()[0].terms().size() == 3 &&
                           system.inputs()[1].terms().size() == 3 &&
                           system.inputs()[2].terms().size() == 5 &&
                           system.output_terms().size() == 5 && system.rules().size() == 20;
    std::ostringstream detail;
    detail << "validator diagnostics = " << diagnostics.size() << " (need 0); rules = "
           << system.rules().size() << " (need 20); input terms = "
           << system.inputs()[0].terms().size() << "+" << system.inputs()[1].terms().size() << "+"
           << system.inputs()[2].terms().size() << " (need 3+3+5); output terms = "
           << system.output_terms().size() << " (need 5)";
    report(8, diagnostics.empty() && counts_ok, detail.str());
}

}  // namespace

int main() {
    const fuzzy::FuzzySystem system = kb::build_default_kb();
    criterion_1_table_reproduction(system);
    criterion_2_worked_example(system);
    criterion_3_fis_vs_bp(system);
    criterion_4_regime_properties(system);
    criterion_5_gradient_oracle();
    criterion_6_centroid_oracle();
    criterion_7_determinism();
    criterion_8_kb_hygiene(system);
    std::cout << "ACCEPTANCE: " << (8 - failures) << "/8 criteria passed\n";
    return failures;
}
