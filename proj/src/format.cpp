#include "copulas/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <algorithm>

namespace copulas {

std::string format_shortest(double x) {
    if (x == 0.0) return "0";  // folds -0 into 0
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

std::string format_significant12(double x) {
    constexpr int kDigits = 12;
    if (x == 0.0 || !std::isfinite(x)) {
        if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
        return "0.000000000000";
    }
    // Round to 12 significant digits first so that the exponent accounts for
    // carries such as 9.999...e-1 -> 1.00000000000.
    std::array<char, 64> sci{};
    std::snprintf(sci.data(), sci.size(), "%.*e", kDigits - 1, x);
    const char* e = sci.data();
    while (*e != 'e') ++e;
    const int exponent = std::atoi(e + 1);
    const int decimals = std::max(0, kDigits - 1 - exponent);
    std::array<char, 512> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", decimals, x);
    return std::string(buf.data());
}

}  // namespace copulas
