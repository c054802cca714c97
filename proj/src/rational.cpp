#include "octopus/rational.hpp"

#include <cctype>

#include "octopus/error.hpp"

namespace octopus {

std::string to_string(const Gb& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

BigInt parse_digits(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw Error(ErrorCode::ParseError, "malformed number '" + std::string(whole) + "'");
  }
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::ParseError,
                  "malformed number '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(text));
}

}  // namespace

Gb parse_gb(std::string_view text) {
  const std::string_view whole = text;
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Gb value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt den = parse_digits(text.substr(slash + 1), whole);
    if (den == 0) {
      throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(whole) + "'");
    }
    value = Gb(parse_digits(text.substr(0, slash), whole), den);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const BigInt int_part =
        dot == 0 ? BigInt(0) : parse_digits(text.substr(0, dot), whole);
    const BigInt frac_part = frac.empty() ? BigInt(0) : parse_digits(frac, whole);
    value = Gb(int_part * scale + frac_part, scale);
  } else {
    value = Gb(parse_digits(text, whole));
  }
  return negative ? Gb(-value) : value;
}

double to_double(const Gb& value) { return value.convert_to<double>(); }

BigInt floor_of(const Gb& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

}  // namespace octopus
