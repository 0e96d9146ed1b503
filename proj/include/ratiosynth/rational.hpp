#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ratiosynth {

/// Exact rational number used for probabilities, costs and exact values.
using Rational = mpq_class;

/// Parses "n/d", "n" or a finite decimal such as "0.25". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "n/d" form, or "n" when the denominator is one.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace ratiosynth
