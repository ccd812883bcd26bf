#include "revivalkit/format.hpp"

#include <cmath>
#include <cstdio>

namespace revivalkit {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace revivalkit
