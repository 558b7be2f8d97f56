#pragma once

#include <string>

#include "bks/matrix.hpp"

namespace bks {

/// Shortest text that parses back to the same double.
std::string format_number(double x);

/// "a", "b*i", or "a+b*i" / "a-b*i", each part in shortest round-trip form.
std::string format_complex(Complex z);

}  // namespace bks
