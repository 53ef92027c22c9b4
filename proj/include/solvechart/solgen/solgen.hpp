// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <solvechart/dsl/ast.hpp>

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace solvechart::solgen {

/// Optional chart metadata appended to the user turn.
struct ChartHints {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<std::string> series;
};

struct PromptBundle {
    std::string system;
    std::string user;
    bool operator==(const PromptBundle&) const = default;
};

/// Version tag of the shipped system prompt.
inline constexpr std::string_view kPromptVersion = "v1";
std::string_view system_prompt();

/// Deterministic. Throws std::invalid_argument on an empty question.
PromptBundle build_prompt(const std::string& question, const std::optional<ChartHints>& hints = std::nullopt);

class ExtractionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// First fenced block if any; otherwise the longest line suffix that parses.
std::string extract_program(const std::string& llm_text);

struct ChatMessage {
    std::string role;
    std::string content;
    bool operator==(const ChatMessage&) const = default;
};

/// One chat-completion call. `question`, `chart_id` and `attempt` identify
/// the call for cassettes; live clients only send `messages`.
struct CompletionRequest {
    std::vector<ChatMessage> messages;
    std::string question;
    std::string chart_id;
    int attempt = 0;
};

enum class GenerationErrorKind { Transport, CassetteMiss, InvalidProgram };

class GenerationError : public std::runtime_error {
public:
    GenerationError(GenerationErrorKind kind, const std::string& message)
        : std::runtime_error(message)
        , kind_(kind)
    {
    }
    GenerationErrorKind kind() const noexcept { return kind_; }

private:
    GenerationErrorKind kind_;
};

class ChatClient {
public:
    virtual ~ChatClient() = default;
    /// Returns the first choice's message content. Throws GenerationError.
    virtual std::string complete(const CompletionRequest& request) = 0;
};

inline constexpr std::string_view kApiKeyVariable = "SOLVECHART_API_KEY";

struct LlmConfig {
    std::string endpoint;
    std::string model = "Qwen2-7B-Instruct";
    double temperature = 0.0;
    int max_tokens = 512;
    std::string api_key; // read from SOLVECHART_API_KEY by from_environment()
    std::chrono::milliseconds timeout{60000};
    std::size_t max_in_flight = 4;

    static LlmConfig from_environment(std::string endpoint);
};

/// OpenAI-compatible POST {endpoint}/v1/chat/completions.
class OpenAiChatClient : public ChatClient {
public:
    explicit OpenAiChatClient(LlmConfig config);
    std::string complete(const CompletionRequest& request) override;

    static nlohmann::json request_body(const LlmConfig& config, const std::vector<ChatMessage>& messages);

private:
    LlmConfig config_;
    std::mutex slots_mutex_;
    std::condition_variable slots_cv_;
    std::size_t in_flight_ = 0;
};

struct LlmCassetteEntry {
    std::string chart_id;
    std::string question;
    int attempt = 0;
    std::string response;
    bool operator==(const LlmCassetteEntry&) const = default;
};

/// Recorded completions keyed by (chart_id, normalized question, attempt).
/// In record mode a miss is forwarded to `live` and appended.
class CassetteChatClient : public ChatClient {
public:
    explicit CassetteChatClient(std::vector<LlmCassetteEntry> entries, ChatClient* live = nullptr);

    static CassetteChatClient load(const std::filesystem::path& path, ChatClient* live = nullptr);
    void save(const std::filesystem::path& path) const;

    std::string complete(const CompletionRequest& request) override;
    std::vector<LlmCassetteEntry> entries() const;

private:
    using Key = std::tuple<std::string, std::string, int>;
    mutable std::mutex mutex_;
    std::vector<LlmCassetteEntry> entries_;
    std::map<Key, std::size_t> index_;
    ChatClient* live_;
};

nlohmann::json llm_cassette_to_json(const std::vector<LlmCassetteEntry>& entries);
std::vector<LlmCassetteEntry> llm_cassette_from_json(const nlohmann::json& doc);

/// build_prompt -> complete -> extract_program -> parse_program, with one
/// repair attempt that feeds the failure back to the model. The result always
/// assigns `answer` on every path.
dsl::SolutionProgram generate_solution(const std::string& question, ChatClient& client,
                                       const std::optional<ChartHints>& hints = std::nullopt,
                                       const std::string& chart_id = {});

} // namespace solvechart::solgen
