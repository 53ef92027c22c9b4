// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace solvechart::engine {

/// Runtime value. Numbers are always finite.
struct Value {
    using List = std::vector<Value>;
    using Data = std::variant<double, std::string, bool, List>;
    Data data;

    static Value number(double v) { return Value{Data(std::in_place_type<double>, v)}; }
    static Value text(std::string v) { return Value{Data(std::in_place_type<std::string>, std::move(v))}; }
    static Value boolean(bool v) { return Value{Data(std::in_place_type<bool>, v)}; }
    static Value list(List v) { return Value{Data(std::in_place_type<List>, std::move(v))}; }

    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_text() const { return std::holds_alternative<std::string>(data); }
    bool is_boolean() const { return std::holds_alternative<bool>(data); }
    bool is_list() const { return std::holds_alternative<List>(data); }

    double as_number() const { return std::get<double>(data); }
    const std::string& as_text() const { return std::get<std::string>(data); }
    bool as_boolean() const { return std::get<bool>(data); }
    const List& as_list() const { return std::get<List>(data); }

    bool operator==(const Value&) const = default;
};

std::string_view kind_name(const Value& v);

/// Agent text to value: trims, drops one trailing '%', drops ',' separators,
/// then reads [sign] digits [. digits]. Anything else stays Text(raw).
Value coerce_numeric(std::string_view raw);

/// Numbers print with at most 6 fractional digits and no trailing zeros;
/// booleans as Yes/No; lists comma-separated.
std::string stringify(const Value& v);

} // namespace solvechart::engine
