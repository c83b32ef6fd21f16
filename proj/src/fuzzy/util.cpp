#include "flowfis/util.hpp"

#include <charconv>
#include <system_error>

namespace flowfis::util {

std::string format_double(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return {buf, end};
}

}  // namespace flowfis::util
