// SPDX-License-Identifier: Apache-2.0

#include <solvechart/dsl/parser.hpp>
#include <solvechart/solgen/solgen.hpp>

#include <optional>

namespace solvechart::solgen {

namespace {

std::optional<std::string> first_fenced_block(const std::string& text)
{
    const auto open = text.find("```");
    if (open == std::string::npos)
        return std::nullopt;
    // Skip the info string (```python, ```text, ...).
    auto body = text.find('\n', open + 3);
    if (body == std::string::npos)
        return std::nullopt;
    ++body;
    const auto close = text.find("```", body);
    if (close == std::string::npos)
        return std::nullopt;
    return text.substr(body, close - body);
}

bool parses(const std::string& source)
{
    try {
        const auto program = dsl::parse_program(source);
        return !program.statements.empty();
    } catch (const dsl::ParseError&) {
        return false;
    }
}

} // namespace

std::string extract_program(const std::string& llm_text)
{
    if (auto block = first_fenced_block(llm_text))
        return *block;

    // Line starts from the top down: the first one that parses is the longest suffix.
    std::size_t start = 0;
    while (start < llm_text.size()) {
        const std::string suffix = llm_text.substr(start);
        if (parses(suffix))
            return suffix;
        const auto nl = llm_text.find('\n', start);
        if (nl == std::string::npos)
            break;
        start = nl + 1;
    }
    throw ExtractionError("no solution program found in model response");
}

} // namespace solvechart::solgen
