#include "chebproxy/text.hpp"

#include "chebproxy/error.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace chebproxy {

std::string to_shortest(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) fail(ErrorKind::format, "cannot format double");
    return std::string(buf, end);
}

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty())
        fail(ErrorKind::format, "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    return value;
}

unsigned long long parse_unsigned(std::string_view text, std::string_view what) {
    text = trim(text);
    unsigned long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        fail(ErrorKind::format, "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    return value;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(text.substr(start));
            return out;
        }
        out.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view text) noexcept {
    const auto ws = " \t\r\n";
    const auto b = text.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = text.find_last_not_of(ws);
    return text.substr(b, e - b + 1);
}

}  // namespace chebproxy
