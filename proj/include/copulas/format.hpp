#pragma once

#include <string>

namespace copulas {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_shortest(double x);

/// Fixed notation with 12 significant digits (ties resolved by the C
/// library's default round-half-even conversion). Used for CLI output.
std::string format_significant12(double x);

}  // namespace copulas
