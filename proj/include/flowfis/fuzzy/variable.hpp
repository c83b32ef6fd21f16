#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "flowfis/fuzzy/membership.hpp"

namespace flowfis::fuzzy {

/// One named fuzzy term of a linguistic variable.
struct Term {
    std::string label;
    MembershipFunction mf;

    bool operator==(const Term&) const = default;
};

/// Term label -> membership degree. std::map keeps iteration deterministic.
using TermDegrees = std::map<std::string, double, std::less<>>;

/// An input quantity described by an ordered family of fuzzy terms over a
/// shared universe.
class LinguisticVariable {
  public:
    LinguisticVariable(std::string name, Universe universe, std::vector<Term> terms)
        : name_(std::move(name)), universe_(universe), terms_(std::move(terms)) {}

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const Universe& universe() const { return universe_; }
    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] const MembershipFunction* find_term(std::string_view label) const;

    /// Degree of every term at clamp(x). On a validated variable at least
    /// one entry is positive (coverage invariant).
    [[nodiscard]] TermDegrees fuzzify(double x) const;

    bool operator==(const LinguisticVariable&) const = default;

  private:
    std::string name_;
    Universe universe_;
    std::vector<Term> terms_;
};

}  // namespace flowfis::fuzzy
