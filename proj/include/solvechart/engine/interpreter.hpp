// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <solvechart/agents/agent.hpp>
#include <solvechart/dsl/ast.hpp>
#include <solvechart/engine/value.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace solvechart::engine {

enum class StepKind { AgentCall, Assignment, Branch, Fallback };

struct TraceStep {
    StepKind kind;
    std::string detail;
    std::optional<Value> value;
    bool operator==(const TraceStep&) const = default;
};

struct AgentCallRecord {
    agents::Operator op;
    std::string question;
    std::string raw_answer;
    bool operator==(const AgentCallRecord&) const = default;
};

struct ExecutionTrace {
    std::vector<TraceStep> steps;
    std::vector<AgentCallRecord> agent_calls; // in Call evaluation order
    std::size_t nodes_evaluated = 0;
    bool operator==(const ExecutionTrace&) const = default;
};

struct ExecutionResult {
    Value answer;
    ExecutionTrace trace;
    bool fallback_used = false;
    bool operator==(const ExecutionResult&) const = default;
};

enum class ErrorKind { UnboundVariable, TypeMismatch, DivisionByZero, AnswerUnassigned, AgentFailure, NonFinite };

std::string_view error_kind_name(ErrorKind kind);

class EngineError : public std::runtime_error {
public:
    EngineError(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message)
        , kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct EngineConfig {
    /// On EngineError, issue one ASK(question) instead of failing.
    bool fallback_to_ask = false;
    std::string question;
    std::string chart_id;
};

using Environment = std::map<std::string, Value, std::less<>>;

ExecutionResult execute(const dsl::SolutionProgram& program, agents::Agent& agent, const EngineConfig& config);

/// Evaluates one expression. Agent calls are appended to `trace`.
Value eval_expr(const dsl::Expression& expr, const Environment& env, agents::Agent& agent, ExecutionTrace& trace,
                const std::string& chart_id = {});

nlohmann::json value_to_json(const Value& v);
/// Array of step records; agent_call records carry operator, question and raw answer.
nlohmann::json trace_to_json(const ExecutionTrace& trace);
std::string_view step_kind_name(StepKind kind);

} // namespace solvechart::engine
