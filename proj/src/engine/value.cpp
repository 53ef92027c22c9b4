// SPDX-License-Identifier: Apache-2.0

#include <solvechart/engine/value.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>

namespace solvechart::engine {

namespace {

std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// [sign] (digits [. digits*] | . digits)
bool is_decimal(std::string_view s)
{
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
        ++i;
    std::size_t int_digits = 0, frac_digits = 0;
    while (i < s.size() && is_digit(s[i])) {
        ++i;
        ++int_digits;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) {
            ++i;
            ++frac_digits;
        }
    }
    return i == s.size() && int_digits + frac_digits > 0;
}

} // namespace

std::string_view kind_name(const Value& v)
{
    switch (v.data.index()) {
    case 0: return "Number";
    case 1: return "Text";
    case 2: return "Boolean";
    default: return "List";
    }
}

Value coerce_numeric(std::string_view raw)
{
    std::string_view s = trim(raw);
    if (!s.empty() && s.back() == '%')
        s = trim(s.substr(0, s.size() - 1));

    std::string cleaned;
    cleaned.reserve(s.size());
    for (char c : s) {
        if (c != ',')
            cleaned += c;
    }
    if (!is_decimal(cleaned))
        return Value::text(std::string(raw));

    std::string_view digits = cleaned;
    if (!digits.empty() && digits.front() == '+')
        digits.remove_prefix(1);
    std::string buffer(digits);
    if (!buffer.empty() && buffer.back() == '.')
        buffer.pop_back();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{} || ptr != buffer.data() + buffer.size() || !std::isfinite(value))
        return Value::text(std::string(raw));
    return Value::number(value);
}

std::string stringify(const Value& v)
{
    if (v.is_number()) {
        char buf[400];
        std::snprintf(buf, sizeof buf, "%.6f", v.as_number());
        std::string out = buf;
        while (!out.empty() && out.back() == '0')
            out.pop_back();
        if (!out.empty() && out.back() == '.')
            out.pop_back();
        if (out == "-0")
            out = "0";
        return out;
    }
    if (v.is_text())
        return v.as_text();
    if (v.is_boolean())
        return v.as_boolean() ? "Yes" : "No";
    std::string out;
    const auto& items = v.as_list();
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += stringify(items[i]);
    }
    return out;
}

} // namespace solvechart::engine
