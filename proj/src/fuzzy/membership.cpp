#include "flowfis/fuzzy/membership.hpp"

#include <algorithm>

namespace flowfis::fuzzy {

bool MembershipFunction::breakpoints_sorted() const {
    return std::is_sorted(pts_.begin(), pts_.begin() + static_cast<std::ptrdiff_t>(count_));
}

bool MembershipFunction::operator==(const MembershipFunction& other) const {
    return kind_ == other.kind_ && count_ == other.count_ &&
           std::equal(pts_.begin(), pts_.begin() + static_cast<std::ptrdiff_t>(count_),
                      other.pts_.begin());
}

double MembershipFunction::eval(double x) const noexcept {
    // Branch order keeps every division well-defined: x < b implies b > a
    // (else x < a would have returned already), and symmetrically on the
    // falling edge.
    if (x < pts_[0] || x > pts_[count_ - 1]) {
        return 0.0;
    }
    if (kind_ == MfKind::triangle) {
        const double a = pts_[0], b = pts_[1], c = pts_[2];
        if (x < b) return (x - a) / (b - a);
        if (x > b) return (c - x) / (c - b);
        return 1.0;
    }
    const double a = pts_[0], b = pts_[1], c = pts_[2], d = pts_[3];
    if (x < b) return (x - a) / (b - a);
    if (x > c) return (d - x) / (d - c);
    return 1.0;
}

double defuzzify_centroid(const std::function<double(double)>& mu, const Universe& universe) {
    double mass = 0.0;
    double moment = 0.0;
    for (int i = 0; i < universe.resolution; ++i) {
        const double x = universe.sample(i);
        const double m = mu(x);
        mass += m;
        moment += x * m;
    }
    if (mass <= 0.0) {
        throw EmptyFuzzySetError{};
    }
    return moment / mass;
}

}  // namespace flowfis::fuzzy
