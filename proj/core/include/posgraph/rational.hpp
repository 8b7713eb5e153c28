#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace posgraph {

using BigInt = mpz_class;
using Rational = mpq_class;

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Accepts "p", "-p", "p/q". Throws ParseError on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

/// Nearest k/denominator to x.
Rational round_to_denominator(double x, long denominator);

}  // namespace posgraph
