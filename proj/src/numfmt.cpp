#include "lqgwalk/numfmt.hpp"

#include <cstdio>
#include <cstdlib>

namespace lqgwalk {

std::string format_number(double v) {
    if (v == 0.0) v = 0.0; // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", kSignificantDigits, v);
    return buf;
}

double quantize(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

} // namespace lqgwalk
