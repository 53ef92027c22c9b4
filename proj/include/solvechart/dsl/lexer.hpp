// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solvechart::dsl {

enum class TokenKind { Identifier, Number, String, Operator, Keyword, Newline, Indent, Dedent, End };

std::string_view token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string lexeme; // raw source text; empty for synthesized layout tokens
    int line = 1;
    int column = 1;
    bool operator==(const Token&) const = default;
};

/// Syntax error with a 1-based source location.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    int line_;
    int column_;
    std::string detail_;
};

/// Raised by the tokenizer; a ParseError so callers of parse_program see one family.
class LexError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Python-style layout: INDENT/DEDENT at block boundaries, NEWLINE after each
/// logical line, newlines inside brackets ignored, `#` comments dropped.
std::vector<Token> tokenize(std::string_view source);

} // namespace solvechart::dsl
