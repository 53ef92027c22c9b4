// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <solvechart/dsl/ast.hpp>
#include <solvechart/dsl/lexer.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace solvechart::dsl {

/// Parses a solution program. Validation findings land in `warnings`; the
/// hash is taken over the canonical text.
SolutionProgram parse_program(std::string_view source);

/// Canonical text: 4-space indentation, one statement per line, parentheses
/// only where precedence requires them. Empty program formats to "".
std::string format_program(const SolutionProgram& program);
std::string format_expression(const Expression& expr);

/// Shortest text that reads back to the same double.
std::string format_number_literal(double value);

/// Static checks: `answer` definitely assigned, no statements after an
/// unconditional top-level `answer` assignment.
std::vector<Diagnostic> validate(const Block& statements);

bool has_diagnostic(const SolutionProgram& program, std::string_view code);

inline constexpr std::string_view kAnswerUnassigned = "answer-unassigned";
inline constexpr std::string_view kDeadCode = "dead-code";

std::string content_digest(std::string_view text);

} // namespace solvechart::dsl
