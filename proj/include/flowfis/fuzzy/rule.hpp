#pragma once

#include <string>
#include <vector>

namespace flowfis::fuzzy {

/// One antecedent condition: "<variable> is <term>".
struct Clause {
    std::string variable;
    std::string term;

    bool operator==(const Clause&) const = default;
};

/// Weighted AND-rule: "IF clause_1 AND ... AND clause_n THEN <class> is
/// <output term>". Weight scales the firing strength and must lie in (0, 1].
struct Rule {
    std::vector<Clause> antecedent;
    std::string consequent_class;
    std::string consequent_term;
    double weight = 1.0;

    bool operator==(const Rule&) const = default;
};

}  // namespace flowfis::fuzzy
