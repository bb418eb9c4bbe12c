#include "dpca/format.hpp"

#include <cmath>
#include <cstdio>

namespace dpca {

std::string format_real(double value) {
  if (std::isnan(value)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace dpca
