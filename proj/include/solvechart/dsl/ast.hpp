// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace solvechart::dsl {

/// Owning pointer with value semantics, used to close the recursive AST types.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other)
    {
        if (this != &other)
            ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

struct Expression;

struct NumberLit {
    double value = 0.0;
    bool operator==(const NumberLit&) const = default;
};

struct StringLit {
    std::string value;
    bool operator==(const StringLit&) const = default;
};

struct BoolLit {
    bool value = false;
    bool operator==(const BoolLit&) const = default;
};

struct Identifier {
    std::string name;
    bool operator==(const Identifier&) const = default;
};

enum class UnaryOp { Neg, Not };

struct Unary {
    UnaryOp op;
    Box<Expression> operand;
    bool operator==(const Unary&) const = default;
};

enum class BinaryOp { Add, Sub, Mul, Div, FloorDiv, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

struct Binary {
    BinaryOp op;
    Box<Expression> left;
    Box<Expression> right;
    bool operator==(const Binary&) const = default;
};

struct ListLit {
    std::vector<Expression> items;
    bool operator==(const ListLit&) const = default;
};

// The callee set is closed; anything else in call position is a parse error.
enum class Callee { Ask, Substep, Abs, Min, Max, Sum, Round };

struct Call {
    Callee callee;
    std::vector<Expression> args;
    bool operator==(const Call&) const = default;
};

struct Expression {
    std::variant<NumberLit, StringLit, BoolLit, Identifier, Unary, Binary, ListLit, Call> node;
    bool operator==(const Expression&) const = default;
};

struct Statement;
using Block = std::vector<Statement>;

struct Assignment {
    std::string target;
    Expression value;
    bool operator==(const Assignment&) const = default;
};

struct Branch {
    Expression condition;
    Block body;
    bool operator==(const Branch&) const = default;
};

/// `if` / `elif`* / `else`?; branches[0] is the `if` arm.
struct If {
    std::vector<Branch> branches;
    std::optional<Block> else_body;
    bool operator==(const If&) const = default;
};

struct Statement {
    std::variant<Assignment, If> node;
    bool operator==(const Statement&) const = default;
};

struct Diagnostic {
    std::string code;
    std::string message;
    bool operator==(const Diagnostic&) const = default;
};

/// The variable whose final binding is the program's output.
inline constexpr std::string_view kAnswerVariable = "answer";

struct SolutionProgram {
    Block statements;
    std::string source_hash;          // digest of the canonical form
    std::vector<Diagnostic> warnings; // validation findings, never fatal
    bool operator==(const SolutionProgram&) const = default;
};

std::string_view callee_name(Callee callee);
std::optional<Callee> callee_from_name(std::string_view name);
std::string_view operator_symbol(BinaryOp op);
bool is_agent_call(Callee callee);

/// Number of Expression and Statement nodes in the program.
std::size_t node_count(const SolutionProgram& program);

// Construction helpers; used by tests and generators.
namespace build {
inline Expression number(double v) { return Expression{NumberLit{v}}; }
inline Expression text(std::string v) { return Expression{StringLit{std::move(v)}}; }
inline Expression boolean(bool v) { return Expression{BoolLit{v}}; }
inline Expression ident(std::string name) { return Expression{Identifier{std::move(name)}}; }
inline Expression unary(UnaryOp op, Expression e) { return Expression{Unary{op, std::move(e)}}; }
inline Expression binary(BinaryOp op, Expression l, Expression r)
{
    return Expression{Binary{op, std::move(l), std::move(r)}};
}
inline Expression list(std::vector<Expression> items) { return Expression{ListLit{std::move(items)}}; }
inline Expression call(Callee callee, std::vector<Expression> args)
{
    return Expression{Call{callee, std::move(args)}};
}
inline Statement assign(std::string target, Expression value)
{
    return Statement{Assignment{std::move(target), std::move(value)}};
}
} // namespace build

} // namespace solvechart::dsl
