#pragma once

#include <string>

namespace sbs {

/// Shortest round-trip decimal representation (locale independent).
std::string format_shortest(double v);

/// Scientific notation with 17 significant digits; round-trip exact for
/// double, '.' decimal separator regardless of locale.
std::string format_sci17(double v);

/// Locale-independent parse of a double; throws ConfigError on garbage.
double parse_double(const std::string& s);

} // namespace sbs
