// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/backends.hpp>
#include <solvechart/agents/url.hpp>
#include <solvechart/solgen/solgen.hpp>

#include <cstdlib>
#include <fstream>

#include <httplib.h>

namespace solvechart::solgen {

LlmConfig LlmConfig::from_environment(std::string endpoint)
{
    LlmConfig config;
    config.endpoint = std::move(endpoint);
    if (const char* key = std::getenv(std::string(kApiKeyVariable).c_str()))
        config.api_key = key;
    return config;
}

OpenAiChatClient::OpenAiChatClient(LlmConfig config)
    : config_(std::move(config))
{
    if (config_.temperature < 0.0)
        throw std::invalid_argument("temperature must be non-negative");
    if (config_.max_tokens <= 0)
        throw std::invalid_argument("max_tokens must be positive");
    if (config_.max_in_flight == 0)
        config_.max_in_flight = 1;
}

nlohmann::json OpenAiChatClient::request_body(const LlmConfig& config, const std::vector<ChatMessage>& messages)
{
    auto msgs = nlohmann::json::array();
    for (const auto& m : messages)
        msgs.push_back({{"role", m.role}, {"content", m.content}});
    return {
        {"model", config.model},
        {"messages", std::move(msgs)},
        {"temperature", config.temperature},
        {"max_tokens", config.max_tokens},
    };
}

std::string OpenAiChatClient::complete(const CompletionRequest& request)
{
    {
        std::unique_lock lock(slots_mutex_);
        slots_cv_.wait(lock, [&] { return in_flight_ < config_.max_in_flight; });
        ++in_flight_;
    }
    struct Release {
        OpenAiChatClient* self;
        ~Release()
        {
            {
                std::lock_guard lock(self->slots_mutex_);
                --self->in_flight_;
            }
            self->slots_cv_.notify_one();
        }
    } release{this};

    const auto url = agents::split_endpoint(config_.endpoint);
    httplib::Client client(url.origin);
    if (!client.is_valid())
        throw GenerationError(GenerationErrorKind::Transport, "invalid LLM endpoint: " + config_.endpoint);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    httplib::Headers headers;
    if (!config_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + config_.api_key);

    const auto res = client.Post(url.base_path + "/v1/chat/completions", headers,
                                 request_body(config_, request.messages).dump(), "application/json");
    if (!res)
        throw GenerationError(GenerationErrorKind::Transport, "LLM request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw GenerationError(GenerationErrorKind::Transport, "LLM endpoint returned HTTP " + std::to_string(res->status));

    const auto body = nlohmann::json::parse(res->body, nullptr, false);
    try {
        return body.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw GenerationError(GenerationErrorKind::Transport, "LLM response has no choices[0].message.content");
    }
}

// ---- cassette -------------------------------------------------------------

CassetteChatClient::CassetteChatClient(std::vector<LlmCassetteEntry> entries, ChatClient* live)
    : live_(live)
{
    for (auto& e : entries) {
        Key key{e.chart_id, agents::RecordedSession::normalize_question(e.question), e.attempt};
        if (index_.emplace(std::move(key), entries_.size()).second)
            entries_.push_back(std::move(e));
    }
}

CassetteChatClient CassetteChatClient::load(const std::filesystem::path& path, ChatClient* live)
{
    std::ifstream in(path);
    if (!in)
        throw GenerationError(GenerationErrorKind::CassetteMiss, "cannot open LLM cassette " + path.string());
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw GenerationError(GenerationErrorKind::CassetteMiss, "LLM cassette is not valid JSON: " + path.string());
    return CassetteChatClient(llm_cassette_from_json(doc), live);
}

void CassetteChatClient::save(const std::filesystem::path& path) const
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write LLM cassette " + path.string());
    out << llm_cassette_to_json(entries()).dump(2) << '\n';
}

std::string CassetteChatClient::complete(const CompletionRequest& request)
{
    Key key{request.chart_id, agents::RecordedSession::normalize_question(request.question), request.attempt};
    {
        std::lock_guard lock(mutex_);
        if (auto it = index_.find(key); it != index_.end())
            return entries_[it->second].response;
    }
    if (!live_)
        throw GenerationError(GenerationErrorKind::CassetteMiss,
                              "no recorded completion for \"" + request.question + "\" (attempt "
                                  + std::to_string(request.attempt) + ")");
    std::string response = live_->complete(request);
    std::lock_guard lock(mutex_);
    if (index_.emplace(key, entries_.size()).second)
        entries_.push_back({request.chart_id, request.question, request.attempt, response});
    return response;
}

std::vector<LlmCassetteEntry> CassetteChatClient::entries() const
{
    std::lock_guard lock(mutex_);
    return entries_;
}

nlohmann::json llm_cassette_to_json(const std::vector<LlmCassetteEntry>& entries)
{
    auto arr = nlohmann::json::array();
    for (const auto& e : entries) {
        arr.push_back(
            {{"chart_id", e.chart_id}, {"question", e.question}, {"attempt", e.attempt}, {"response", e.response}});
    }
    return {{"completions", std::move(arr)}};
}

std::vector<LlmCassetteEntry> llm_cassette_from_json(const nlohmann::json& doc)
{
    std::vector<LlmCassetteEntry> out;
    try {
        for (const auto& e : doc.at("completions")) {
            out.push_back({e.value("chart_id", std::string{}), e.at("question").get<std::string>(),
                           e.value("attempt", 0), e.at("response").get<std::string>()});
        }
    } catch (const nlohmann::json::exception& ex) {
        throw GenerationError(GenerationErrorKind::CassetteMiss, std::string("malformed LLM cassette: ") + ex.what());
    }
    return out;
}

} // namespace solvechart::solgen
