// SPDX-License-Identifier: Apache-2.0

#include <solvechart/engine/interpreter.hpp>

namespace solvechart::engine {

std::string_view step_kind_name(StepKind kind)
{
    switch (kind) {
    case StepKind::AgentCall: return "agent_call";
    case StepKind::Assignment: return "assignment";
    case StepKind::Branch: return "branch";
    case StepKind::Fallback: return "fallback";
    }
    return "?";
}

nlohmann::json value_to_json(const Value& v)
{
    if (v.is_number())
        return v.as_number();
    if (v.is_text())
        return v.as_text();
    if (v.is_boolean())
        return v.as_boolean();
    auto out = nlohmann::json::array();
    for (const auto& item : v.as_list())
        out.push_back(value_to_json(item));
    return out;
}

nlohmann::json trace_to_json(const ExecutionTrace& trace)
{
    auto steps = nlohmann::json::array();
    std::size_t call_index = 0;
    for (const auto& step : trace.steps) {
        nlohmann::json record = {{"kind", step_kind_name(step.kind)}, {"detail", step.detail}};
        if (step.kind == StepKind::AgentCall && call_index < trace.agent_calls.size()) {
            const auto& call = trace.agent_calls[call_index++];
            record["operator"] = agents::operator_name(call.op);
            record["question"] = call.question;
            record["raw_answer"] = call.raw_answer;
        }
        if (step.value)
            record["value"] = value_to_json(*step.value);
        steps.push_back(std::move(record));
    }
    return steps;
}

} // namespace solvechart::engine
