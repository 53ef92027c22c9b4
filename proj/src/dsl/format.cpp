// SPDX-License-Identifier: Apache-2.0

#include <solvechart/dsl/parser.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace solvechart::dsl {

namespace {

enum Precedence : int {
    kOr = 1,
    kAnd = 2,
    kNot = 3,
    kComparison = 4,
    kAdditive = 5,
    kMultiplicative = 6,
    kNegation = 7,
    kPrimary = 8,
};

int precedence(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Or: return kOr;
    case BinaryOp::And: return kAnd;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return kComparison;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kAdditive;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::FloorDiv:
    case BinaryOp::Mod: return kMultiplicative;
    }
    return kPrimary;
}

int precedence(const Expression& e)
{
    if (const auto* b = std::get_if<Binary>(&e.node))
        return precedence(b->op);
    if (const auto* u = std::get_if<Unary>(&e.node))
        return u->op == UnaryOp::Neg ? kNegation : kNot;
    // A negative literal prints with a leading '-' and re-parses as negation.
    if (const auto* n = std::get_if<NumberLit>(&e.node); n && std::signbit(n->value))
        return kNegation;
    return kPrimary;
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c; break;
        }
    }
    out += '"';
    return out;
}

void write_expr(std::string& out, const Expression& e);

void write_operand(std::string& out, const Expression& e, bool parenthesize)
{
    if (parenthesize)
        out += '(';
    write_expr(out, e);
    if (parenthesize)
        out += ')';
}

void write_list(std::string& out, const std::vector<Expression>& items)
{
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0)
            out += ", ";
        write_expr(out, items[i]);
    }
}

void write_expr(std::string& out, const Expression& e)
{
    std::visit(
        [&out](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NumberLit>) {
                out += format_number_literal(n.value);
            } else if constexpr (std::is_same_v<T, StringLit>) {
                out += quote(n.value);
            } else if constexpr (std::is_same_v<T, BoolLit>) {
                out += n.value ? "True" : "False";
            } else if constexpr (std::is_same_v<T, Identifier>) {
                out += n.name;
            } else if constexpr (std::is_same_v<T, Unary>) {
                if (n.op == UnaryOp::Neg) {
                    out += '-';
                    write_operand(out, *n.operand, precedence(*n.operand) < kNegation);
                } else {
                    out += "not ";
                    write_operand(out, *n.operand, precedence(*n.operand) < kNot);
                }
            } else if constexpr (std::is_same_v<T, Binary>) {
                const int p = precedence(n.op);
                // Left-associative: the right operand needs parens at equal precedence.
                // Comparisons do not chain, so both sides need them.
                const bool left_parens = p == kComparison ? precedence(*n.left) <= p : precedence(*n.left) < p;
                write_operand(out, *n.left, left_parens);
                out += ' ';
                out += operator_symbol(n.op);
                out += ' ';
                write_operand(out, *n.right, precedence(*n.right) <= p);
            } else if constexpr (std::is_same_v<T, ListLit>) {
                out += '[';
                write_list(out, n.items);
                out += ']';
            } else if constexpr (std::is_same_v<T, Call>) {
                out += callee_name(n.callee);
                out += '(';
                write_list(out, n.args);
                out += ')';
            }
        },
        e.node);
}

void write_block(std::string& out, const Block& block, int depth)
{
    const std::string indent(static_cast<std::size_t>(depth) * 4, ' ');
    for (const auto& stmt : block) {
        if (const auto* a = std::get_if<Assignment>(&stmt.node)) {
            out += indent + a->target + " = ";
            write_expr(out, a->value);
            out += '\n';
            continue;
        }
        const auto& s = std::get<If>(stmt.node);
        for (std::size_t i = 0; i < s.branches.size(); ++i) {
            out += indent + (i == 0 ? "if " : "elif ");
            write_expr(out, s.branches[i].condition);
            out += ":\n";
            write_block(out, s.branches[i].body, depth + 1);
        }
        if (s.else_body) {
            out += indent + "else:\n";
            write_block(out, *s.else_body, depth + 1);
        }
    }
}

} // namespace

std::string format_number_literal(double value)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        return "0";
    return std::string(buf.data(), ptr);
}

std::string format_expression(const Expression& expr)
{
    std::string out;
    write_expr(out, expr);
    return out;
}

std::string format_program(const SolutionProgram& program)
{
    std::string out;
    write_block(out, program.statements, 0);
    return out;
}

std::string content_digest(std::string_view text)
{
    // FNV-1a, 64-bit
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace solvechart::dsl
