#pragma once

#include <string>

namespace latticebeam {

/// printf-style "%.<digits>g" rendering of a double.
std::string format_g(double value, int significant_digits);

/// 17 significant digits: parses back to the identical double.
inline std::string format_exact(double value) { return format_g(value, 17); }

}  // namespace latticebeam
