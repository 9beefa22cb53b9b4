#pragma once

#include <cstdint>
#include <string>

#include "pdhp/types.hpp"

namespace pdhp {

// Decimal serialization with 17 significant digits; parsing the result
// recovers the exact double, so archives round-trip bit-exactly.
std::string format_double(double value);

// Strict full-string parsers; throw std::invalid_argument on junk.
double parse_double(const std::string& text);
long long parse_int(const std::string& text);
std::uint64_t parse_uint64(const std::string& text);
bool parse_bool(const std::string& text);  // "true"/"false"/"1"/"0"

std::string trim(const std::string& s);

}  // namespace pdhp
