// SPDX-License-Identifier: Apache-2.0

#include <solvechart/engine/value.hpp>
#include <solvechart/eval/eval.hpp>

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace solvechart::eval {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::string fold(std::string_view s)
{
    std::string out;
    for (char c : trim(s))
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::vector<std::string_view> split_list(std::string_view s)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto comma = s.find(',', start);
        parts.push_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            return parts;
        start = comma + 1;
    }
}

bool scalar_match(std::string_view prediction, std::string_view gold, double tolerance)
{
    const auto p = engine::coerce_numeric(prediction);
    const auto g = engine::coerce_numeric(gold);
    if (p.is_number() && g.is_number()) {
        const double pv = p.as_number();
        const double gv = g.as_number();
        if (gv == 0.0)
            return pv == 0.0;
        return std::fabs(pv - gv) <= tolerance * std::fabs(gv);
    }
    return fold(prediction) == fold(gold);
}

} // namespace

bool relaxed_match(std::string_view prediction, std::string_view gold, double tolerance)
{
    if (!(tolerance >= 0.0))
        throw std::invalid_argument("tolerance must be non-negative");
    if (scalar_match(prediction, gold, tolerance))
        return true;
    // "1,234" already coerced as a number above; lists only when both sides split evenly.
    const auto ps = split_list(prediction);
    const auto gs = split_list(gold);
    if (gs.size() < 2 || ps.size() != gs.size())
        return false;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        if (!scalar_match(ps[i], gs[i], tolerance))
            return false;
    }
    return true;
}

std::string_view mode_name(Mode mode) { return mode == Mode::AgentOnly ? "agent_only" : "programmatic"; }

std::optional<Mode> mode_from_name(std::string_view name)
{
    if (name == "agent_only" || name == "agent-only")
        return Mode::AgentOnly;
    if (name == "programmatic")
        return Mode::Programmatic;
    return std::nullopt;
}

} // namespace solvechart::eval
