// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/backends.hpp>
#include <solvechart/agents/url.hpp>

#include <httplib.h>

namespace solvechart::agents {

EndpointUrl split_endpoint(std::string_view url)
{
    const auto scheme = url.find("://");
    const auto path_start = url.find('/', scheme == std::string_view::npos ? 0 : scheme + 3);
    EndpointUrl out;
    out.origin = std::string(url.substr(0, path_start));
    if (path_start != std::string_view::npos)
        out.base_path = std::string(url.substr(path_start));
    while (!out.base_path.empty() && out.base_path.back() == '/')
        out.base_path.pop_back();
    return out;
}

AgentAnswer http_answer(const std::string& endpoint, const AgentQuery& query, std::chrono::milliseconds timeout)
{
    const auto url = split_endpoint(endpoint);
    httplib::Client client(url.origin);
    if (!client.is_valid())
        throw AgentError(AgentErrorKind::Transport, "invalid agent endpoint: " + endpoint);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    const nlohmann::json request = {
        {"question", query.question},
        {"chart_id", query.chart_id},
        {"operator", operator_name(query.op)},
    };

    const auto start = std::chrono::steady_clock::now();
    const auto res = client.Post(url.base_path + "/answer", request.dump(), "application/json");
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);

    if (!res) {
        const auto err = res.error();
        // Read timeouts surface as Read errors once the deadline has passed.
        if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && elapsed >= timeout))
            throw AgentError(AgentErrorKind::Timeout, "agent request timed out: " + httplib::to_string(err));
        throw AgentError(AgentErrorKind::Transport, "agent request failed: " + httplib::to_string(err));
    }
    if (res->status != 200)
        throw AgentError(AgentErrorKind::Transport, "agent returned HTTP " + std::to_string(res->status));

    const auto body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded() || !body.is_object())
        throw AgentError(AgentErrorKind::BadResponse, "agent response is not a JSON object");
    const auto answer = body.find("answer");
    if (answer == body.end() || !answer->is_string())
        throw AgentError(AgentErrorKind::BadResponse, "agent response has no string 'answer'");
    if (answer->get_ref<const std::string&>().empty())
        throw AgentError(AgentErrorKind::BadResponse, "agent returned an empty answer");
    return AgentAnswer{answer->get<std::string>(), elapsed.count(), "http"};
}

} // namespace solvechart::agents
