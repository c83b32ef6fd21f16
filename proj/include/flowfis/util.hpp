#pragma once

#include <string>

namespace flowfis::util {

/// Shortest decimal string that round-trips to the same double
/// (std::to_chars). Locale-independent, deterministic.
std::string format_double(double value);

}  // namespace flowfis::util
