#include "latticebeam/text_format.hpp"

#include <cstdio>

namespace latticebeam {

std::string format_g(double value, int significant_digits) {
    char buf[64];
    const int len = std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
    return std::string(buf, static_cast<std::size_t>(len));
}

}  // namespace latticebeam
