#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace chebproxy {

/// Shortest decimal that round-trips to the same 64-bit double.
std::string to_shortest(double value);

/// Strict full-string parse; throws ErrorKind::format with `what` in the message.
double parse_double(std::string_view text, std::string_view what);
unsigned long long parse_unsigned(std::string_view text, std::string_view what);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text) noexcept;

}  // namespace chebproxy
