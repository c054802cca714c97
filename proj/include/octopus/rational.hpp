#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace octopus {

// Capacities and shares in GB, kept exact.
using Gb = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Gb gb(std::int64_t whole) { return Gb(whole); }

// "50", "100/3" (reduced).
std::string to_string(const Gb& value);
// Accepts an integer, a decimal ("12.5") or a fraction ("100/3").
Gb parse_gb(std::string_view text);
double to_double(const Gb& value);

BigInt floor_of(const Gb& value);

}  // namespace octopus
