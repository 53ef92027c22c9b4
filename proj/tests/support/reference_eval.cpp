// SPDX-License-Identifier: Apache-2.0

#include "reference_eval.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <regex>

namespace solvechart::testing {

namespace {

struct Fail {
    std::string kind;
};

// A term is either a finished literal or an unreduced DSL node.
struct Term;
using TermPtr = std::shared_ptr<Term>;
struct Term {
    std::optional<RefValue> lit;
    const dsl::Expression* node = nullptr;
    std::vector<TermPtr> kids;
};

TermPtr literal(RefValue v)
{
    auto t = std::make_shared<Term>();
    t->lit = std::move(v);
    return t;
}

bool is_num(const RefValue& v) { return v.v.index() == 0; }
bool is_text(const RefValue& v) { return v.v.index() == 1; }
bool is_bool(const RefValue& v) { return v.v.index() == 2; }
bool is_list(const RefValue& v) { return v.v.index() == 3; }
double num(const RefValue& v) { return std::get<double>(v.v); }
const std::string& text(const RefValue& v) { return std::get<std::string>(v.v); }
bool boolean(const RefValue& v) { return std::get<bool>(v.v); }

RefValue N(double x) { return RefValue{x}; }
RefValue B(bool x) { return RefValue{x}; }

double checked(double x)
{
    if (std::isnan(x) || std::isinf(x))
        throw Fail{"NonFinite"};
    return x;
}

double need_num(const RefValue& v)
{
    if (!is_num(v))
        throw Fail{"TypeMismatch"};
    return num(v);
}

bool need_bool(const RefValue& v)
{
    if (!is_bool(v))
        throw Fail{"TypeMismatch"};
    return boolean(v);
}

bool deep_equal(const RefValue& a, const RefValue& b)
{
    if (a.v.index() != b.v.index())
        throw Fail{"TypeMismatch"};
    if (is_list(a)) {
        const auto& x = std::get<RefValue::List>(a.v);
        const auto& y = std::get<RefValue::List>(b.v);
        if (x.size() != y.size())
            return false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!deep_equal(x[i], y[i]))
                return false;
        }
        return true;
    }
    return a == b;
}

double py_mod(double a, double b)
{
    double r = std::fmod(a, b);
    if (r == 0.0)
        return std::copysign(0.0, b);
    return ((r < 0) != (b < 0)) ? r + b : r;
}

double py_floordiv(double a, double b)
{
    const double r = std::fmod(a, b);
    double q = (a - r) / b;
    if (r != 0.0 && ((r < 0) != (b < 0)))
        q -= 1.0;
    if (q == 0.0)
        return std::copysign(0.0, a / b);
    const double f = std::floor(q);
    return q - f > 0.5 ? f + 1.0 : f;
}

double half_even(double x)
{
    const double f = std::floor(x);
    const double diff = x - f;
    if (diff > 0.5)
        return f + 1.0;
    if (diff < 0.5)
        return f;
    return std::fmod(f, 2.0) == 0.0 ? f : f + 1.0;
}

class Reducer {
public:
    Reducer(const std::map<std::string, RefValue>& env, const RefAgent& agent, std::vector<std::string>& log)
        : env_(env)
        , agent_(agent)
        , log_(log)
    {
    }

    TermPtr build(const dsl::Expression& e)
    {
        auto t = std::make_shared<Term>();
        t->node = &e;
        if (const auto* id = std::get_if<dsl::Identifier>(&e.node)) {
            // Substitution: bound names become literals up front.
            if (auto it = env_.find(id->name); it != env_.end())
                return literal(it->second);
            return t;
        }
        if (const auto* n = std::get_if<dsl::NumberLit>(&e.node))
            return literal(N(n->value));
        if (const auto* s = std::get_if<dsl::StringLit>(&e.node))
            return literal(RefValue{s->value});
        if (const auto* b = std::get_if<dsl::BoolLit>(&e.node))
            return literal(B(b->value));
        if (const auto* u = std::get_if<dsl::Unary>(&e.node))
            t->kids.push_back(build(*u->operand));
        if (const auto* bin = std::get_if<dsl::Binary>(&e.node)) {
            t->kids.push_back(build(*bin->left));
            t->kids.push_back(build(*bin->right));
        }
        if (const auto* l = std::get_if<dsl::ListLit>(&e.node)) {
            for (const auto& item : l->items)
                t->kids.push_back(build(item));
        }
        if (const auto* c = std::get_if<dsl::Call>(&e.node)) {
            for (const auto& a : c->args)
                t->kids.push_back(build(a));
        }
        return t;
    }

    // Performs exactly one rewrite somewhere inside t (leftmost-innermost).
    // Returns the replacement for t.
    TermPtr step(const TermPtr& t)
    {
        const dsl::Expression& e = *t->node;
        if (const auto* bin = std::get_if<dsl::Binary>(&e.node);
            bin && (bin->op == dsl::BinaryOp::And || bin->op == dsl::BinaryOp::Or)) {
            if (!t->kids[0]->lit) {
                t->kids[0] = step(t->kids[0]);
                return t;
            }
            const bool left = need_bool(*t->kids[0]->lit);
            if (bin->op == dsl::BinaryOp::And ? !left : left)
                return literal(B(left));
            if (!t->kids[1]->lit) {
                t->kids[1] = step(t->kids[1]);
                return t;
            }
            return literal(B(need_bool(*t->kids[1]->lit)));
        }
        for (auto& k : t->kids) {
            if (!k->lit) {
                k = step(k);
                return t;
            }
        }
        return literal(contract(e, t->kids));
    }

    RefValue reduce(const dsl::Expression& e)
    {
        TermPtr t = build(e);
        while (!t->lit)
            t = step(t);
        return *t->lit;
    }

private:
    RefValue contract(const dsl::Expression& e, const std::vector<TermPtr>& kids)
    {
        std::vector<RefValue> a;
        for (const auto& k : kids)
            a.push_back(*k->lit);

        if (std::holds_alternative<dsl::Identifier>(e.node))
            throw Fail{"UnboundVariable"};
        if (const auto* u = std::get_if<dsl::Unary>(&e.node)) {
            if (u->op == dsl::UnaryOp::Neg)
                return N(-need_num(a[0]));
            return B(!need_bool(a[0]));
        }
        if (std::holds_alternative<dsl::ListLit>(e.node))
            return RefValue{RefValue::List(a.begin(), a.end())};
        if (const auto* bin = std::get_if<dsl::Binary>(&e.node))
            return binary(bin->op, a[0], a[1]);
        return call(std::get<dsl::Call>(e.node).callee, a);
    }

    RefValue binary(dsl::BinaryOp op, const RefValue& l, const RefValue& r)
    {
        using dsl::BinaryOp;
        switch (op) {
        case BinaryOp::Eq: return B(deep_equal(l, r));
        case BinaryOp::Ne: return B(!deep_equal(l, r));
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: {
            int c;
            if (is_num(l) && is_num(r))
                c = (num(l) > num(r)) - (num(l) < num(r));
            else if (is_text(l) && is_text(r))
                c = text(l) < text(r) ? -1 : (text(r) < text(l) ? 1 : 0);
            else
                throw Fail{"TypeMismatch"};
            if (op == BinaryOp::Lt)
                return B(c < 0);
            if (op == BinaryOp::Le)
                return B(c <= 0);
            if (op == BinaryOp::Gt)
                return B(c > 0);
            return B(c >= 0);
        }
        case BinaryOp::Add:
            if ((is_text(l) && (is_text(r) || is_num(r))) || (is_num(l) && is_text(r)))
                return RefValue{ref_stringify(l) + ref_stringify(r)};
            return N(checked(need_num(l) + need_num(r)));
        case BinaryOp::Sub: return N(checked(need_num(l) - need_num(r)));
        case BinaryOp::Mul: return N(checked(need_num(l) * need_num(r)));
        case BinaryOp::Div:
        case BinaryOp::FloorDiv:
        case BinaryOp::Mod: {
            const double x = need_num(l), y = need_num(r);
            if (y == 0.0)
                throw Fail{"DivisionByZero"};
            if (op == BinaryOp::Div)
                return N(checked(x / y));
            return N(checked(op == BinaryOp::Mod ? py_mod(x, y) : py_floordiv(x, y)));
        }
        default: break;
        }
        throw Fail{"unreachable"};
    }

    RefValue call(dsl::Callee callee, const std::vector<RefValue>& a)
    {
        using dsl::Callee;
        if (callee == Callee::Ask || callee == Callee::Substep) {
            if (!is_text(a[0]))
                throw Fail{"TypeMismatch"};
            const std::string op = callee == Callee::Ask ? "ASK" : "SUBSTEP";
            log_.push_back(op + ": " + text(a[0]));
            return ref_coerce(agent_(op, text(a[0])));
        }
        if (callee == Callee::Abs)
            return N(std::fabs(need_num(a[0])));
        if (callee == Callee::Round)
            return N(checked(half_even(need_num(a[0]))));

        std::vector<double> xs;
        if (a.size() == 1) {
            if (!is_list(a[0]))
                throw Fail{"TypeMismatch"};
            for (const auto& item : std::get<RefValue::List>(a[0].v))
                xs.push_back(need_num(item));
        } else {
            for (const auto& x : a)
                xs.push_back(need_num(x));
        }
        if (callee == Callee::Sum) {
            double s = 0.0;
            for (double x : xs)
                s += x;
            return N(checked(s));
        }
        if (xs.empty())
            throw Fail{"TypeMismatch"};
        double best = xs.front();
        for (double x : xs) {
            if (callee == Callee::Min ? x < best : x > best)
                best = x;
        }
        return N(best);
    }

    const std::map<std::string, RefValue>& env_;
    const RefAgent& agent_;
    std::vector<std::string>& log_;
};

void run_block(const dsl::Block& block, std::map<std::string, RefValue>& env, const RefAgent& agent,
               std::vector<std::string>& log)
{
    for (const auto& stmt : block) {
        if (const auto* asg = std::get_if<dsl::Assignment>(&stmt.node)) {
            RefValue v = Reducer(env, agent, log).reduce(asg->value);
            env[asg->target] = std::move(v);
            continue;
        }
        const auto& s = std::get<dsl::If>(stmt.node);
        bool taken = false;
        for (const auto& br : s.branches) {
            if (need_bool(Reducer(env, agent, log).reduce(br.condition))) {
                run_block(br.body, env, agent, log);
                taken = true;
                break;
            }
        }
        if (!taken && s.else_body)
            run_block(*s.else_body, env, agent, log);
    }
}

} // namespace

std::string ref_stringify(const RefValue& v)
{
    if (is_num(v)) {
        char buf[400];
        std::snprintf(buf, sizeof buf, "%.6f", num(v));
        std::string s = buf;
        s.erase(s.find_last_not_of('0') + 1);
        if (s.back() == '.')
            s.pop_back();
        return s == "-0" ? "0" : s;
    }
    if (is_text(v))
        return text(v);
    if (is_bool(v))
        return boolean(v) ? "Yes" : "No";
    const auto& items = std::get<RefValue::List>(v.v);
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? ", " : "") + ref_stringify(items[i]);
    return out;
}

RefValue ref_coerce(const std::string& raw)
{
    static const std::regex shape(R"(^\s*([+-]?(\d+(\.\d*)?|\.\d+))\s*%?\s*$)");
    std::string no_commas;
    for (char c : raw) {
        if (c != ',')
            no_commas += c;
    }
    std::smatch m;
    if (!std::regex_match(no_commas, m, shape))
        return RefValue{raw};
    const double x = std::strtod(m[1].str().c_str(), nullptr);
    if (std::isinf(x))
        return RefValue{raw};
    return N(x);
}

RefOutcome reference_run(const dsl::Block& program, const RefAgent& agent)
{
    RefOutcome out;
    std::map<std::string, RefValue> env;
    try {
        run_block(program, env, agent, out.questions);
        if (auto it = env.find("answer"); it != env.end())
            out.answer = it->second;
        else
            out.error_kind = "AnswerUnassigned";
    } catch (const Fail& f) {
        out.error_kind = f.kind;
    }
    return out;
}

} // namespace solvechart::testing
