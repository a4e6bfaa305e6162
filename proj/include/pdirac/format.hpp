#pragma once

#include <string>

namespace pdirac {

// 17 significant digits: enough for exact double round-trip, and identical
// across runs for deterministic CSV output.  NaN prints as "nan".
std::string fmt17(double v);

}  // namespace pdirac
