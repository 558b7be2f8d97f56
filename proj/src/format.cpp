#include "bks/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace bks {

std::string format_number(double x) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return format_number(z.real());
    if (z.real() == 0.0) return format_number(z.imag()) + "*i";
    return format_number(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + format_number(std::abs(z.imag())) + "*i";
}

}  // namespace bks
