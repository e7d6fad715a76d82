#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gocheck {

/// Arbitrary precision rational; the exact scalar backend.
using Rational = mpq_class;

/// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on malformed
/// text or a zero denominator. The result is canonical.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form (q >= 1, always written).
std::string format_rational(const Rational& value);

/// Best rational approximation with denominator <= max_denominator
/// (continued fractions).
Rational rationalize(double value, long max_denominator = 1000000);

}  // namespace gocheck
