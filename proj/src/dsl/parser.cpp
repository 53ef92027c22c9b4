// SPDX-License-Identifier: Apache-2.0

#include <solvechart/dsl/parser.hpp>

#include <charconv>
#include <cmath>

namespace solvechart::dsl {

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Block parse_file()
    {
        Block statements;
        while (check(TokenKind::Newline))
            next();
        while (!check(TokenKind::End))
            statements.push_back(parse_statement());
        return statements;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
    bool check(TokenKind kind) const { return peek().kind == kind; }
    bool check(TokenKind kind, std::string_view lexeme) const
    {
        return peek().kind == kind && peek().lexeme == lexeme;
    }
    bool check_op(std::string_view op) const { return check(TokenKind::Operator, op); }
    bool check_kw(std::string_view kw) const { return check(TokenKind::Keyword, kw); }

    [[noreturn]] void fail(const Token& at, const std::string& message) const
    {
        throw ParseError(message, at.line, at.column);
    }

    static std::string describe(const Token& t)
    {
        if (t.lexeme.empty())
            return std::string(token_kind_name(t.kind));
        return "'" + t.lexeme + "'";
    }

    const Token& expect_op(std::string_view op)
    {
        if (!check_op(op))
            fail(peek(), "expected '" + std::string(op) + "' but found " + describe(peek()));
        return next();
    }

    void expect(TokenKind kind, std::string_view what)
    {
        if (!check(kind))
            fail(peek(), "expected " + std::string(what) + " but found " + describe(peek()));
        next();
    }

    Statement parse_statement()
    {
        if (check(TokenKind::Indent))
            fail(peek(), "unexpected indent");
        if (check_kw("if"))
            return parse_if();
        if (check(TokenKind::Identifier) && peek(1).kind == TokenKind::Operator && peek(1).lexeme == "=") {
            std::string target = next().lexeme;
            next(); // '='
            Expression value = parse_expression();
            end_of_line();
            return Statement{Assignment{std::move(target), std::move(value)}};
        }
        fail(peek(), "expected an assignment or 'if' statement but found " + describe(peek()));
    }

    void end_of_line()
    {
        if (!check(TokenKind::Newline))
            fail(peek(), "expected end of line but found " + describe(peek()));
        next();
    }

    Statement parse_if()
    {
        If stmt;
        next(); // 'if'
        stmt.branches.push_back(parse_branch());
        while (check_kw("elif")) {
            next();
            stmt.branches.push_back(parse_branch());
        }
        if (check_kw("else")) {
            next();
            expect_op(":");
            stmt.else_body = parse_block();
        }
        return Statement{std::move(stmt)};
    }

    Branch parse_branch()
    {
        Expression condition = parse_expression();
        expect_op(":");
        return Branch{std::move(condition), parse_block()};
    }

    Block parse_block()
    {
        expect(TokenKind::Newline, "end of line after ':'");
        if (!check(TokenKind::Indent))
            fail(peek(), "expected an indented block");
        next();
        Block body;
        while (!check(TokenKind::Dedent) && !check(TokenKind::End))
            body.push_back(parse_statement());
        expect(TokenKind::Dedent, "dedent");
        return body;
    }

    // Precedence, loosest first: or, and, not, comparison, + -, * / // %, unary -, primary.
    Expression parse_expression() { return parse_or(); }

    Expression parse_or()
    {
        Expression left = parse_and();
        while (check_kw("or")) {
            next();
            left = build::binary(BinaryOp::Or, std::move(left), parse_and());
        }
        return left;
    }

    Expression parse_and()
    {
        Expression left = parse_not();
        while (check_kw("and")) {
            next();
            left = build::binary(BinaryOp::And, std::move(left), parse_not());
        }
        return left;
    }

    Expression parse_not()
    {
        if (check_kw("not")) {
            next();
            return build::unary(UnaryOp::Not, parse_not());
        }
        return parse_comparison();
    }

    static std::optional<BinaryOp> comparison_op(const Token& t)
    {
        if (t.kind != TokenKind::Operator)
            return std::nullopt;
        if (t.lexeme == "==") return BinaryOp::Eq;
        if (t.lexeme == "!=") return BinaryOp::Ne;
        if (t.lexeme == "<") return BinaryOp::Lt;
        if (t.lexeme == "<=") return BinaryOp::Le;
        if (t.lexeme == ">") return BinaryOp::Gt;
        if (t.lexeme == ">=") return BinaryOp::Ge;
        return std::nullopt;
    }

    Expression parse_comparison()
    {
        Expression left = parse_additive();
        if (auto op = comparison_op(peek())) {
            next();
            left = build::binary(*op, std::move(left), parse_additive());
            if (comparison_op(peek()))
                fail(peek(), "chained comparisons are not supported; use 'and'");
        }
        return left;
    }

    Expression parse_additive()
    {
        Expression left = parse_multiplicative();
        while (check_op("+") || check_op("-")) {
            const BinaryOp op = next().lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
            left = build::binary(op, std::move(left), parse_multiplicative());
        }
        return left;
    }

    Expression parse_multiplicative()
    {
        Expression left = parse_unary();
        while (check_op("*") || check_op("/") || check_op("//") || check_op("%")) {
            const std::string& sym = next().lexeme;
            const BinaryOp op = sym == "*" ? BinaryOp::Mul
                : sym == "/"              ? BinaryOp::Div
                : sym == "//"             ? BinaryOp::FloorDiv
                                          : BinaryOp::Mod;
            left = build::binary(op, std::move(left), parse_unary());
        }
        return left;
    }

    Expression parse_unary()
    {
        if (check_op("-")) {
            next();
            return build::unary(UnaryOp::Neg, parse_unary());
        }
        return parse_primary();
    }

    Expression parse_primary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::Number: {
            next();
            return build::number(parse_number(t));
        }
        case TokenKind::String:
            next();
            return build::text(decode_string(t));
        case TokenKind::Keyword:
            if (t.lexeme == "True" || t.lexeme == "False") {
                next();
                return build::boolean(t.lexeme == "True");
            }
            break;
        case TokenKind::Identifier:
            if (peek(1).kind == TokenKind::Operator && peek(1).lexeme == "(")
                return parse_call();
            next();
            return build::ident(t.lexeme);
        case TokenKind::Operator:
            if (t.lexeme == "(") {
                next();
                Expression inner = parse_expression();
                expect_op(")");
                return inner;
            }
            if (t.lexeme == "[") {
                next();
                std::vector<Expression> items = parse_arguments("]");
                return build::list(std::move(items));
            }
            break;
        default:
            break;
        }
        fail(t, "expected an expression but found " + describe(t));
    }

    std::vector<Expression> parse_arguments(std::string_view closer)
    {
        std::vector<Expression> items;
        while (!check_op(closer)) {
            items.push_back(parse_expression());
            if (!check_op(","))
                break;
            next();
        }
        expect_op(closer);
        return items;
    }

    Expression parse_call()
    {
        const Token name = next();
        const auto callee = callee_from_name(name.lexeme);
        if (!callee)
            fail(name, "unknown callee " + name.lexeme);
        next(); // '('
        std::vector<Expression> args = parse_arguments(")");
        check_arity(*callee, args.size(), name);
        return build::call(*callee, std::move(args));
    }

    void check_arity(Callee callee, std::size_t count, const Token& at) const
    {
        const std::string name(callee_name(callee));
        switch (callee) {
        case Callee::Ask:
        case Callee::Substep:
        case Callee::Abs:
        case Callee::Round:
            if (count != 1)
                fail(at, name + " takes exactly one argument (" + std::to_string(count) + " given)");
            break;
        case Callee::Min:
        case Callee::Max:
        case Callee::Sum:
            if (count == 0)
                fail(at, name + " takes a list or at least two arguments");
            break;
        }
    }

    double parse_number(const Token& t) const
    {
        double value = 0.0;
        std::string_view text = t.lexeme;
        if (!text.empty() && text.back() == '.')
            text.remove_suffix(1);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
            fail(t, "number literal out of range: " + t.lexeme);
        return value;
    }

    static std::string decode_string(const Token& t)
    {
        std::string out;
        const std::string& raw = t.lexeme;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\') {
                switch (raw[++i]) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                default: out += raw[i]; break;
                }
            } else {
                out += raw[i];
            }
        }
        return out;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

std::string_view callee_name(Callee callee)
{
    switch (callee) {
    case Callee::Ask: return "ASK";
    case Callee::Substep: return "SUBSTEP";
    case Callee::Abs: return "abs";
    case Callee::Min: return "min";
    case Callee::Max: return "max";
    case Callee::Sum: return "sum";
    case Callee::Round: return "round";
    }
    return "?";
}

std::optional<Callee> callee_from_name(std::string_view name)
{
    for (auto c : {Callee::Ask, Callee::Substep, Callee::Abs, Callee::Min, Callee::Max, Callee::Sum, Callee::Round}) {
        if (callee_name(c) == name)
            return c;
    }
    return std::nullopt;
}

bool is_agent_call(Callee callee) { return callee == Callee::Ask || callee == Callee::Substep; }

std::string_view operator_symbol(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::FloorDiv: return "//";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
    }
    return "?";
}

namespace {

std::size_t count_nodes(const Expression& e);

std::size_t count_nodes(const Block& block)
{
    std::size_t total = 0;
    for (const auto& stmt : block) {
        total += 1;
        if (const auto* a = std::get_if<Assignment>(&stmt.node)) {
            total += count_nodes(a->value);
        } else {
            const auto& s = std::get<If>(stmt.node);
            for (const auto& b : s.branches)
                total += count_nodes(b.condition) + count_nodes(b.body);
            if (s.else_body)
                total += count_nodes(*s.else_body);
        }
    }
    return total;
}

std::size_t count_nodes(const Expression& e)
{
    return 1 + std::visit(
               [](const auto& n) -> std::size_t {
                   using T = std::decay_t<decltype(n)>;
                   if constexpr (std::is_same_v<T, Unary>) {
                       return count_nodes(*n.operand);
                   } else if constexpr (std::is_same_v<T, Binary>) {
                       return count_nodes(*n.left) + count_nodes(*n.right);
                   } else if constexpr (std::is_same_v<T, ListLit>) {
                       std::size_t s = 0;
                       for (const auto& item : n.items)
                           s += count_nodes(item);
                       return s;
                   } else if constexpr (std::is_same_v<T, Call>) {
                       std::size_t s = 0;
                       for (const auto& arg : n.args)
                           s += count_nodes(arg);
                       return s;
                   } else {
                       return 0;
                   }
               },
               e.node);
}

} // namespace

std::size_t node_count(const SolutionProgram& program) { return count_nodes(program.statements); }

SolutionProgram parse_program(std::string_view source)
{
    Parser parser(tokenize(source));
    SolutionProgram program;
    program.statements = parser.parse_file();
    program.warnings = validate(program.statements);
    program.source_hash = content_digest(format_program(program));
    return program;
}

bool has_diagnostic(const SolutionProgram& program, std::string_view code)
{
    for (const auto& d : program.warnings) {
        if (d.code == code)
            return true;
    }
    return false;
}

} // namespace solvechart::dsl
