// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace solvechart::agents {

/// Carried as metadata only; backends answer both the same way.
enum class Operator { Ask, Substep };

std::string_view operator_name(Operator op);
std::optional<Operator> operator_from_name(std::string_view name);

struct AgentQuery {
    std::string question; // non-empty
    std::string chart_id;
    Operator op = Operator::Ask;
};

struct AgentAnswer {
    std::string answer;
    double latency_ms = 0.0;
    std::string backend;
};

enum class AgentErrorKind { Unanswerable, Transport, Timeout, BadResponse, CassetteMiss };

std::string_view agent_error_kind_name(AgentErrorKind kind);

class AgentError : public std::runtime_error {
public:
    AgentError(AgentErrorKind kind, const std::string& message)
        : std::runtime_error(message)
        , kind_(kind)
    {
    }

    AgentErrorKind kind() const noexcept { return kind_; }

private:
    AgentErrorKind kind_;
};

/// The boundary the engine calls through. Implementations must tolerate
/// concurrent calls to answer().
class Agent {
public:
    virtual ~Agent() = default;
    virtual AgentAnswer answer(const AgentQuery& query) = 0;
};

} // namespace solvechart::agents
