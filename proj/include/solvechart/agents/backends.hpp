// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <solvechart/agents/agent.hpp>
#include <solvechart/agents/chart_table.hpp>

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace solvechart::agents {

// ---- table oracle ---------------------------------------------------------

/// Pure function of (table, query). Throws AgentError(Unanswerable).
AgentAnswer oracle_answer(const ChartTable& table, const AgentQuery& query);

/// Routes by chart_id to a registered table; falls back to the default table.
class OracleAgent : public Agent {
public:
    OracleAgent() = default;
    explicit OracleAgent(ChartTable default_table) : default_table_(std::move(default_table)) {}

    void add_table(std::string chart_id, ChartTable table);
    AgentAnswer answer(const AgentQuery& query) override;

private:
    std::map<std::string, ChartTable, std::less<>> tables_;
    std::optional<ChartTable> default_table_;
};

// ---- HTTP -----------------------------------------------------------------

inline constexpr std::chrono::milliseconds kDefaultAgentTimeout{30000};

/// POST {endpoint}/answer with {"question","chart_id","operator"}; returns the
/// `answer` field verbatim.
AgentAnswer http_answer(const std::string& endpoint, const AgentQuery& query,
                        std::chrono::milliseconds timeout = kDefaultAgentTimeout);

class HttpAgent : public Agent {
public:
    explicit HttpAgent(std::string endpoint, std::chrono::milliseconds timeout = kDefaultAgentTimeout)
        : endpoint_(std::move(endpoint))
        , timeout_(timeout)
    {
    }

    AgentAnswer answer(const AgentQuery& query) override { return http_answer(endpoint_, query, timeout_); }

private:
    std::string endpoint_;
    std::chrono::milliseconds timeout_;
};

// ---- record / replay ------------------------------------------------------

struct CassetteEntry {
    std::string chart_id;
    std::string question;
    std::string answer;
    bool operator==(const CassetteEntry&) const = default;
};

/// Recorded agent traffic keyed by (chart_id, normalized question). Appends
/// are serialized internally; lookups may run concurrently with them.
class RecordedSession {
public:
    RecordedSession() = default;
    explicit RecordedSession(std::vector<CassetteEntry> entries);
    RecordedSession(RecordedSession&& other) noexcept;
    RecordedSession& operator=(RecordedSession&& other) noexcept;

    static RecordedSession load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    std::optional<std::string> find(const std::string& chart_id, const std::string& question) const;
    /// Returns false when the key was already present (first entry wins).
    bool append(CassetteEntry entry);

    std::vector<CassetteEntry> entries() const;
    std::size_t size() const;

    static std::string normalize_question(std::string_view question);

private:
    using Key = std::pair<std::string, std::string>;
    mutable std::mutex mutex_;
    std::vector<CassetteEntry> entries_;
    std::map<Key, std::size_t> index_;
};

nlohmann::json cassette_to_json(const std::vector<CassetteEntry>& entries);
std::vector<CassetteEntry> cassette_from_json(const nlohmann::json& doc);

/// Strict replay: AgentError(CassetteMiss) when the pair was never recorded.
AgentAnswer replay_answer(const RecordedSession& cassette, const AgentQuery& query);

enum class ReplayMode { Strict, Record };

class ReplayAgent : public Agent {
public:
    /// `live` is required in Record mode and consulted only on misses.
    ReplayAgent(RecordedSession& cassette, ReplayMode mode, Agent* live = nullptr);

    AgentAnswer answer(const AgentQuery& query) override;

private:
    RecordedSession& cassette_;
    ReplayMode mode_;
    Agent* live_;
};

} // namespace solvechart::agents
