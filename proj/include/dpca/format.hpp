#pragma once

#include <string>

namespace dpca {

// 17 significant digits; NaN becomes an empty field.
std::string format_real(double value);

}  // namespace dpca
