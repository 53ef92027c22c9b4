// SPDX-License-Identifier: Apache-2.0

#include <solvechart/dsl/parser.hpp>

namespace solvechart::dsl {

namespace {

bool assigns_answer(const Block& block);

bool assigns_answer(const Statement& stmt)
{
    if (const auto* a = std::get_if<Assignment>(&stmt.node))
        return a->target == kAnswerVariable;
    const auto& s = std::get<If>(stmt.node);
    if (!s.else_body || !assigns_answer(*s.else_body))
        return false;
    for (const auto& b : s.branches) {
        if (!assigns_answer(b.body))
            return false;
    }
    return true;
}

// True when every path through `block` binds `answer`.
bool assigns_answer(const Block& block)
{
    for (const auto& stmt : block) {
        if (assigns_answer(stmt))
            return true;
    }
    return false;
}

} // namespace

std::vector<Diagnostic> validate(const Block& statements)
{
    std::vector<Diagnostic> out;
    if (!assigns_answer(statements)) {
        out.push_back({std::string(kAnswerUnassigned),
                       "`answer` is not assigned on every execution path"});
    }
    for (std::size_t i = 0; i < statements.size(); ++i) {
        const auto* a = std::get_if<Assignment>(&statements[i].node);
        if (a && a->target == kAnswerVariable && i + 1 < statements.size()) {
            out.push_back({std::string(kDeadCode),
                           std::to_string(statements.size() - i - 1)
                               + " statement(s) follow the unconditional `answer` assignment (statement "
                               + std::to_string(i + 1) + ")"});
            break;
        }
    }
    return out;
}

} // namespace solvechart::dsl
