// SPDX-License-Identifier: Apache-2.0

#include <solvechart/dsl/lexer.hpp>

#include <array>
#include <cctype>

namespace solvechart::dsl {

namespace {

constexpr std::array kKeywords = {
    std::string_view{"if"},  std::string_view{"elif"}, std::string_view{"else"},  std::string_view{"and"},
    std::string_view{"or"},  std::string_view{"not"},  std::string_view{"True"},  std::string_view{"False"},
};

constexpr std::array kTwoCharOperators = {
    std::string_view{"=="}, std::string_view{"!="}, std::string_view{"<="},
    std::string_view{">="}, std::string_view{"//"},
};

constexpr std::string_view kSingleCharOperators = "+-*/%<>=()[],:";

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run()
    {
        while (!at_end()) {
            if (at_line_start_ && bracket_depth_ == 0) {
                if (!handle_indentation())
                    continue;
            }
            lex_one();
        }
        finish();
        return std::move(tokens_);
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void emit(TokenKind kind, std::string lexeme, int line, int column)
    {
        tokens_.push_back(Token{kind, std::move(lexeme), line, column});
    }

    void skip_comment()
    {
        while (!at_end() && peek() != '\n')
            advance();
    }

    // Returns false when the line turned out blank and was consumed whole.
    bool handle_indentation()
    {
        int width = 0;
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) {
            if (peek() == '\t')
                throw LexError("tab in indentation; use spaces", line_, column_);
            if (peek() == ' ')
                ++width;
            advance();
        }
        if (at_end())
            return false;
        if (peek() == '#')
            skip_comment();
        if (at_end())
            return false;
        if (peek() == '\n') {
            advance();
            return false;
        }

        at_line_start_ = false;
        if (width > indents_.back()) {
            indents_.push_back(width);
            emit(TokenKind::Indent, {}, line_, column_);
        } else {
            while (width < indents_.back()) {
                indents_.pop_back();
                emit(TokenKind::Dedent, {}, line_, column_);
            }
            if (width != indents_.back())
                throw LexError("unindent does not match any outer indentation level", line_, column_);
        }
        return true;
    }

    void lex_one()
    {
        const char c = peek();
        if (c == ' ' || c == '\r' || c == '\t') {
            advance();
            return;
        }
        if (c == '#') {
            skip_comment();
            return;
        }
        if (c == '\n') {
            if (bracket_depth_ == 0) {
                emit(TokenKind::Newline, {}, line_, column_);
                at_line_start_ = true;
            }
            advance();
            return;
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
            lex_number();
            return;
        }
        if (is_ident_start(c)) {
            lex_word();
            return;
        }
        if (c == '"') {
            lex_string();
            return;
        }
        lex_operator();
    }

    void lex_number()
    {
        const int line = line_, column = column_;
        const std::size_t start = pos_;
        while (is_digit(peek()))
            advance();
        if (peek() == '.' && is_digit(peek(1))) {
            advance();
            while (is_digit(peek()))
                advance();
        } else if (peek() == '.' && pos_ > start) {
            // "5." is accepted as 5
            advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            const std::size_t offset = (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
            if (is_digit(peek(offset))) {
                for (std::size_t i = 0; i < offset; ++i)
                    advance();
                while (is_digit(peek()))
                    advance();
            }
        }
        if (is_ident_start(peek()))
            throw LexError("invalid number literal", line, column);
        emit(TokenKind::Number, std::string(src_.substr(start, pos_ - start)), line, column);
    }

    void lex_word()
    {
        const int line = line_, column = column_;
        const std::size_t start = pos_;
        while (is_ident_char(peek()))
            advance();
        std::string word(src_.substr(start, pos_ - start));
        bool keyword = false;
        for (auto kw : kKeywords)
            keyword = keyword || kw == word;
        emit(keyword ? TokenKind::Keyword : TokenKind::Identifier, std::move(word), line, column);
    }

    void lex_string()
    {
        const int line = line_, column = column_;
        const std::size_t start = pos_;
        advance(); // opening quote
        while (true) {
            if (at_end() || peek() == '\n')
                throw LexError("unterminated string literal", line, column);
            const char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                const char next = peek(1);
                if (next != '"' && next != '\\' && next != 'n' && next != 't' && next != 'r')
                    throw LexError("unknown escape sequence in string literal", line_, column_);
                advance();
            }
            advance();
        }
        emit(TokenKind::String, std::string(src_.substr(start, pos_ - start)), line, column);
    }

    void lex_operator()
    {
        const int line = line_, column = column_;
        for (auto op : kTwoCharOperators) {
            if (peek() == op[0] && peek(1) == op[1]) {
                advance();
                advance();
                emit(TokenKind::Operator, std::string(op), line, column);
                return;
            }
        }
        const char c = peek();
        if (kSingleCharOperators.find(c) == std::string_view::npos) {
            throw LexError(std::string("illegal character '") + (std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + hex(c)) + "'",
                           line, column);
        }
        if (c == '(' || c == '[') {
            ++bracket_depth_;
        } else if (c == ')' || c == ']') {
            if (bracket_depth_ == 0)
                throw LexError(std::string("unmatched '") + c + "'", line, column);
            --bracket_depth_;
        }
        advance();
        emit(TokenKind::Operator, std::string(1, c), line, column);
    }

    static std::string hex(char c)
    {
        static constexpr char digits[] = "0123456789abcdef";
        const auto u = static_cast<unsigned char>(c);
        return {digits[u >> 4], digits[u & 0xf]};
    }

    void finish()
    {
        if (bracket_depth_ > 0)
            throw LexError("unclosed bracket at end of input", line_, column_);
        if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline && tokens_.back().kind != TokenKind::Dedent)
            emit(TokenKind::Newline, {}, line_, column_);
        while (indents_.size() > 1) {
            indents_.pop_back();
            emit(TokenKind::Dedent, {}, line_, column_);
        }
        emit(TokenKind::End, {}, line_, column_);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    int bracket_depth_ = 0;
    bool at_line_start_ = true;
    std::vector<int> indents_{0};
    std::vector<Token> tokens_;
};

} // namespace

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message)
    , line_(line)
    , column_(column)
    , detail_(message)
{
}

std::string_view token_kind_name(TokenKind kind)
{
    switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Newline: return "newline";
    case TokenKind::Indent: return "indent";
    case TokenKind::Dedent: return "dedent";
    case TokenKind::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view source)
{
    return Lexer(source).run();
}

} // namespace solvechart::dsl
