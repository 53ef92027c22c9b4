// SPDX-License-Identifier: Apache-2.0

#include <solvechart/engine/interpreter.hpp>

#include <solvechart/dsl/parser.hpp>

#include <cmath>

namespace solvechart::engine {

using namespace solvechart::dsl;

namespace {

[[noreturn]] void type_mismatch(const std::string& what) { throw EngineError(ErrorKind::TypeMismatch, what); }

Value finite(double v, std::string_view op)
{
    if (!std::isfinite(v))
        throw EngineError(ErrorKind::NonFinite, "operator " + std::string(op) + " produced a non-finite number");
    return Value::number(v);
}

bool same_kind(const Value& a, const Value& b) { return a.data.index() == b.data.index(); }

// Equality across kinds is a TypeMismatch, including inside lists.
bool values_equal(const Value& a, const Value& b)
{
    if (!same_kind(a, b))
        type_mismatch("cannot compare " + std::string(kind_name(a)) + " with " + std::string(kind_name(b)));
    if (a.is_list()) {
        const auto& la = a.as_list();
        const auto& lb = b.as_list();
        if (la.size() != lb.size())
            return false;
        for (std::size_t i = 0; i < la.size(); ++i) {
            if (!values_equal(la[i], lb[i]))
                return false;
        }
        return true;
    }
    return a == b;
}

// Python's float // and %: the remainder takes the divisor's sign.
double floor_mod(double a, double b)
{
    double mod = std::fmod(a, b);
    if (mod != 0.0) {
        if ((b < 0) != (mod < 0))
            mod += b;
    } else {
        mod = std::copysign(0.0, b);
    }
    return mod;
}

double floor_div(double a, double b)
{
    double mod = std::fmod(a, b);
    double div = (a - mod) / b;
    if (mod != 0.0 && (b < 0) != (mod < 0))
        div -= 1.0;
    if (div == 0.0)
        return std::copysign(0.0, a / b);
    double floored = std::floor(div);
    if (div - floored > 0.5)
        floored += 1.0;
    return floored;
}

Value arithmetic(BinaryOp op, const Value& l, const Value& r)
{
    const std::string_view sym = operator_symbol(op);
    if (op == BinaryOp::Add) {
        if (l.is_text() && (r.is_text() || r.is_number()))
            return Value::text(l.as_text() + stringify(r));
        if (l.is_number() && r.is_text())
            return Value::text(stringify(l) + r.as_text());
    }
    if (!l.is_number() || !r.is_number()) {
        type_mismatch("operator " + std::string(sym) + " is not defined for " + std::string(kind_name(l)) + " and "
                      + std::string(kind_name(r)));
    }
    const double a = l.as_number();
    const double b = r.as_number();
    switch (op) {
    case BinaryOp::Add: return finite(a + b, sym);
    case BinaryOp::Sub: return finite(a - b, sym);
    case BinaryOp::Mul: return finite(a * b, sym);
    case BinaryOp::Div:
    case BinaryOp::FloorDiv:
    case BinaryOp::Mod:
        if (b == 0.0)
            throw EngineError(ErrorKind::DivisionByZero, "operator " + std::string(sym) + " with zero divisor");
        if (op == BinaryOp::Div)
            return finite(a / b, sym);
        return finite(op == BinaryOp::FloorDiv ? floor_div(a, b) : floor_mod(a, b), sym);
    default: break;
    }
    type_mismatch("not an arithmetic operator");
}

Value ordering(BinaryOp op, const Value& l, const Value& r)
{
    if (op == BinaryOp::Eq)
        return Value::boolean(values_equal(l, r));
    if (op == BinaryOp::Ne)
        return Value::boolean(!values_equal(l, r));

    int cmp = 0;
    if (l.is_number() && r.is_number()) {
        cmp = l.as_number() < r.as_number() ? -1 : (l.as_number() > r.as_number() ? 1 : 0);
    } else if (l.is_text() && r.is_text()) {
        const int c = l.as_text().compare(r.as_text());
        cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
    } else {
        type_mismatch("cannot order " + std::string(kind_name(l)) + " and " + std::string(kind_name(r)));
    }
    switch (op) {
    case BinaryOp::Lt: return Value::boolean(cmp < 0);
    case BinaryOp::Le: return Value::boolean(cmp <= 0);
    case BinaryOp::Gt: return Value::boolean(cmp > 0);
    default: return Value::boolean(cmp >= 0);
    }
}

bool require_boolean(const Value& v, std::string_view context)
{
    if (!v.is_boolean())
        type_mismatch(std::string(context) + " expects Boolean, got " + std::string(kind_name(v)));
    return v.as_boolean();
}

double require_number(const Value& v, std::string_view context)
{
    if (!v.is_number())
        type_mismatch(std::string(context) + " expects Number, got " + std::string(kind_name(v)));
    return v.as_number();
}

class Interpreter {
public:
    Interpreter(agents::Agent& agent, ExecutionTrace& trace, std::string chart_id)
        : agent_(agent)
        , trace_(trace)
        , chart_id_(std::move(chart_id))
    {
    }

    void run_block(const Block& block, Environment& env)
    {
        for (const auto& stmt : block)
            run_statement(stmt, env);
    }

    Value eval(const Expression& e, const Environment& env)
    {
        ++trace_.nodes_evaluated;
        return std::visit([&](const auto& n) { return eval_node(n, env); }, e.node);
    }

private:
    void run_statement(const Statement& stmt, Environment& env)
    {
        ++trace_.nodes_evaluated;
        if (const auto* a = std::get_if<Assignment>(&stmt.node)) {
            Value v = eval(a->value, env);
            trace_.steps.push_back({StepKind::Assignment, a->target, v});
            env.insert_or_assign(a->target, std::move(v));
            return;
        }
        const auto& s = std::get<If>(stmt.node);
        for (std::size_t i = 0; i < s.branches.size(); ++i) {
            const Value cond = eval(s.branches[i].condition, env);
            if (require_boolean(cond, i == 0 ? "if condition" : "elif condition")) {
                trace_.steps.push_back({StepKind::Branch, i == 0 ? "if" : "elif " + std::to_string(i), cond});
                run_block(s.branches[i].body, env);
                return;
            }
        }
        if (s.else_body) {
            trace_.steps.push_back({StepKind::Branch, "else", std::nullopt});
            run_block(*s.else_body, env);
        } else {
            trace_.steps.push_back({StepKind::Branch, "none", std::nullopt});
        }
    }

    Value eval_node(const NumberLit& n, const Environment&) { return Value::number(n.value); }
    Value eval_node(const StringLit& n, const Environment&) { return Value::text(n.value); }
    Value eval_node(const BoolLit& n, const Environment&) { return Value::boolean(n.value); }

    Value eval_node(const Identifier& n, const Environment& env)
    {
        const auto it = env.find(n.name);
        if (it == env.end())
            throw EngineError(ErrorKind::UnboundVariable, "variable '" + n.name + "' is not bound");
        return it->second;
    }

    Value eval_node(const Unary& n, const Environment& env)
    {
        const Value v = eval(*n.operand, env);
        if (n.op == UnaryOp::Neg)
            return Value::number(-require_number(v, "unary -"));
        return Value::boolean(!require_boolean(v, "not"));
    }

    Value eval_node(const Binary& n, const Environment& env)
    {
        if (n.op == BinaryOp::And || n.op == BinaryOp::Or) {
            const bool left = require_boolean(eval(*n.left, env), operator_symbol(n.op));
            if (n.op == BinaryOp::And ? !left : left)
                return Value::boolean(left);
            return Value::boolean(require_boolean(eval(*n.right, env), operator_symbol(n.op)));
        }
        const Value l = eval(*n.left, env);
        const Value r = eval(*n.right, env);
        switch (n.op) {
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: return ordering(n.op, l, r);
        default: return arithmetic(n.op, l, r);
        }
    }

    Value eval_node(const ListLit& n, const Environment& env)
    {
        Value::List items;
        items.reserve(n.items.size());
        for (const auto& item : n.items)
            items.push_back(eval(item, env));
        return Value::list(std::move(items));
    }

    Value eval_node(const Call& n, const Environment& env)
    {
        std::vector<Value> args;
        args.reserve(n.args.size());
        for (const auto& arg : n.args)
            args.push_back(eval(arg, env));

        const std::string name(callee_name(n.callee));
        switch (n.callee) {
        case Callee::Ask:
        case Callee::Substep: return ask_agent(n.callee, args.at(0));
        case Callee::Abs: return Value::number(std::fabs(require_number(args.at(0), name)));
        case Callee::Round: return finite(std::nearbyint(require_number(args.at(0), name)), name);
        case Callee::Min:
        case Callee::Max:
        case Callee::Sum: return aggregate(n.callee, args);
        }
        type_mismatch("unknown callee");
    }

    Value aggregate(Callee callee, const std::vector<Value>& args)
    {
        const std::string name(callee_name(callee));
        std::vector<double> xs;
        if (args.size() == 1) {
            if (!args[0].is_list())
                type_mismatch(name + " with one argument expects a List, got " + std::string(kind_name(args[0])));
            for (const auto& item : args[0].as_list())
                xs.push_back(require_number(item, name));
        } else {
            for (const auto& arg : args)
                xs.push_back(require_number(arg, name));
        }
        if (callee == Callee::Sum) {
            double total = 0.0;
            for (double x : xs)
                total += x;
            return finite(total, name);
        }
        if (xs.empty())
            type_mismatch(name + " of an empty list");
        double best = xs[0];
        for (double x : xs)
            best = callee == Callee::Min ? std::min(best, x) : std::max(best, x);
        return Value::number(best);
    }

    Value ask_agent(Callee callee, const Value& question)
    {
        const std::string name(callee_name(callee));
        if (!question.is_text())
            type_mismatch(name + " expects a Text question, got " + std::string(kind_name(question)));
        const auto op = callee == Callee::Ask ? agents::Operator::Ask : agents::Operator::Substep;
        agents::AgentAnswer reply;
        try {
            reply = agent_.answer(agents::AgentQuery{question.as_text(), chart_id_, op});
        } catch (const agents::AgentError& e) {
            throw EngineError(ErrorKind::AgentFailure, name + "(\"" + question.as_text() + "\") failed: " + e.what());
        }
        Value v = coerce_numeric(reply.answer);
        trace_.agent_calls.push_back({op, question.as_text(), reply.answer});
        trace_.steps.push_back({StepKind::AgentCall, name + ": " + question.as_text(), v});
        return v;
    }

    agents::Agent& agent_;
    ExecutionTrace& trace_;
    std::string chart_id_;
};

} // namespace

std::string_view error_kind_name(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::AnswerUnassigned: return "AnswerUnassigned";
    case ErrorKind::AgentFailure: return "AgentFailure";
    case ErrorKind::NonFinite: return "NonFinite";
    }
    return "?";
}

Value eval_expr(const Expression& expr, const Environment& env, agents::Agent& agent, ExecutionTrace& trace,
                const std::string& chart_id)
{
    return Interpreter(agent, trace, chart_id).eval(expr, env);
}

ExecutionResult execute(const SolutionProgram& program, agents::Agent& agent, const EngineConfig& config)
{
    ExecutionResult result;
    Interpreter interpreter(agent, result.trace, config.chart_id);
    try {
        Environment env;
        interpreter.run_block(program.statements, env);
        const auto it = env.find(kAnswerVariable);
        if (it == env.end())
            throw EngineError(ErrorKind::AnswerUnassigned, "the program finished without binding `answer`");
        result.answer = it->second;
        return result;
    } catch (const EngineError& e) {
        if (!config.fallback_to_ask || config.question.empty())
            throw;
        result.trace.steps.push_back({StepKind::Fallback, e.what(), std::nullopt});
    }

    agents::AgentAnswer reply;
    try {
        reply = agent.answer(agents::AgentQuery{config.question, config.chart_id, agents::Operator::Ask});
    } catch (const agents::AgentError& e) {
        throw EngineError(ErrorKind::AgentFailure, std::string("fallback ASK failed: ") + e.what());
    }
    result.answer = coerce_numeric(reply.answer);
    result.trace.agent_calls.push_back({agents::Operator::Ask, config.question, reply.answer});
    result.trace.steps.push_back({StepKind::AgentCall, "ASK: " + config.question, result.answer});
    result.fallback_used = true;
    return result;
}

} // namespace solvechart::engine
