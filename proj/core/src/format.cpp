#include "dsp/format.hpp"

#include <array>
#include <charconv>
#include <stdexcept>
#include <string>

namespace dsp {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return {buf.data(), end};
}

std::string format_decimal(double value, int min_fraction) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
    if (ec != std::errc{}) throw std::runtime_error("format_decimal failed");
    std::string s(buf.data(), end);
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        s += '.';
        dot = s.size() - 1;
    }
    const auto fraction = static_cast<int>(s.size() - dot - 1);
    if (fraction < min_fraction) s.append(static_cast<std::size_t>(min_fraction - fraction), '0');
    return s;
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return v;
}

long long parse_integer(std::string_view text) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    return v;
}

} // namespace dsp
