#pragma once

#include <string>

namespace lqgwalk {

/// Number of significant digits used for every emitted number.
constexpr int kSignificantDigits = 9;

/// "%.9g" rendering, with -0 printed as 0.
std::string format_number(double v);

/// The double that format_number(v) parses back to. Logged values are stored
/// in this form so written files round-trip bit-exactly.
double quantize(double v);

} // namespace lqgwalk
