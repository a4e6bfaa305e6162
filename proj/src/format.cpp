#include "pdirac/format.hpp"

#include <cmath>
#include <cstdio>

namespace pdirac {

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace pdirac
