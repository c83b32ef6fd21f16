#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>

namespace flowfis::fuzzy {

/// Closed interval [lo, hi] sampled at `resolution` uniform points for the
/// discretized operations (aggregation, centroid defuzzification).
/// `resolution` must be >= 3 and odd so the midpoint lands on a sample.
struct Universe {
    double lo = 0.0;
    double hi = 1.0;
    int resolution = 1001;

    [[nodiscard]] double step() const { return (hi - lo) / static_cast<double>(resolution - 1); }
    [[nodiscard]] double sample(int i) const { return lo + step() * static_cast<double>(i); }
    [[nodiscard]] double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
    [[nodiscard]] bool contains(double x, double tol = 0.0) const {
        return x >= lo - tol && x <= hi + tol;
    }

    bool operator==(const Universe&) const = default;
};

enum class MfKind { triangle, trapezoid };

/// Piecewise-linear membership function: a triangle (breakpoints a <= b <= c,
/// peak at b) or a trapezoid (a <= b <= c <= d, plateau on [b, c]).
/// eval() is total on all reals and returns 0 outside [front, back].
class MembershipFunction {
  public:
    static MembershipFunction triangle(double a, double b, double c) {
        return {MfKind::triangle, {a, b, c, 0.0}, 3};
    }
    static MembershipFunction trapezoid(double a, double b, double c, double d) {
        return {MfKind::trapezoid, {a, b, c, d}, 4};
    }

    [[nodiscard]] double eval(double x) const noexcept;

    [[nodiscard]] MfKind kind() const { return kind_; }
    [[nodiscard]] std::span<const double> breakpoints() const { return {pts_.data(), count_}; }
    [[nodiscard]] double support_lo() const { return pts_[0]; }
    [[nodiscard]] double support_hi() const { return pts_[count_ - 1]; }
    [[nodiscard]] bool breakpoints_sorted() const;

    bool operator==(const MembershipFunction& other) const;

  private:
    MembershipFunction(MfKind kind, std::array<double, 4> pts, std::size_t count)
        : kind_(kind), pts_(pts), count_(count) {}

    MfKind kind_;
    std::array<double, 4> pts_{};
    std::size_t count_ = 0;
};

/// Consequent set clipped at a rule's firing strength (Mamdani min
/// implication): mu(x) = min(base(x), clip).
struct ClippedSet {
    MembershipFunction base;
    double clip = 1.0;

    [[nodiscard]] double eval(double x) const noexcept {
        const double m = base.eval(x);
        return m < clip ? m : clip;
    }
};

/// Thrown by defuzzify_centroid when the set has no mass on the grid.
/// Inference applies the phi = 0 convention instead of calling into this.
struct EmptyFuzzySetError : std::runtime_error {
    EmptyFuzzySetError() : std::runtime_error("cannot defuzzify an empty fuzzy set") {}
};

/// Discrete centroid sum(x_i * mu(x_i)) / sum(mu(x_i)) over the universe grid.
double defuzzify_centroid(const std::function<double(double)>& mu, const Universe& universe);

}  // namespace flowfis::fuzzy
