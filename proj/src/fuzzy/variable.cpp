#include "flowfis/fuzzy/variable.hpp"

namespace flowfis::fuzzy {

const MembershipFunction* LinguisticVariable::find_term(std::string_view label) const {
    for (const Term& term : terms_) {
        if (term.label == label) {
            return &term.mf;
        }
    }
    return nullptr;
}

TermDegrees LinguisticVariable::fuzzify(double x) const {
    const double clamped = universe_.clamp(x);
    TermDegrees degrees;
    for (const Term& term : terms_) {
        degrees.emplace(term.label, term.mf.eval(clamped));
    }
    return degrees;
}

}  // namespace flowfis::fuzzy
