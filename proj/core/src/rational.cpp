#include "posgraph/rational.hpp"

#include <cmath>
#include <string>

#include "posgraph/errors.hpp"

namespace posgraph {

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

BigInt parse_integer(std::string_view text, std::size_t base_offset) {
  std::size_t i = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
  if (i == text.size()) throw ParseError("empty integer", base_offset);
  for (std::size_t k = i; k < text.size(); ++k) {
    if (text[k] < '0' || text[k] > '9') throw ParseError("bad digit in rational", base_offset + k);
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return BigInt(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, 0));
  BigInt num = parse_integer(text.substr(0, slash), 0);
  BigInt den = parse_integer(text.substr(slash + 1), slash + 1);
  if (den == 0) throw ParseError("zero denominator", slash + 1);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational round_to_denominator(double x, long denominator) {
  const double scaled = std::nearbyint(x * static_cast<double>(denominator));
  Rational q(BigInt(static_cast<long>(scaled)), BigInt(denominator));
  q.canonicalize();
  return q;
}

}  // namespace posgraph
