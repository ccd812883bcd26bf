#pragma once

#include <string>

namespace revivalkit {

// Round-trip float formatting used in every CSV (17 significant digits).
std::string format_real(double x);

}  // namespace revivalkit
