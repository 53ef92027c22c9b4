// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/backends.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace solvechart::agents {

std::string RecordedSession::normalize_question(std::string_view question)
{
    std::string out;
    bool space = false;
    for (unsigned char c : question) {
        if (std::isspace(c)) {
            space = true;
            continue;
        }
        if (space && !out.empty())
            out += ' ';
        space = false;
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

RecordedSession::RecordedSession(std::vector<CassetteEntry> entries)
{
    for (auto& e : entries)
        append(std::move(e));
}

RecordedSession::RecordedSession(RecordedSession&& other) noexcept
{
    std::lock_guard lock(other.mutex_);
    entries_ = std::move(other.entries_);
    index_ = std::move(other.index_);
}

RecordedSession& RecordedSession::operator=(RecordedSession&& other) noexcept
{
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        entries_ = std::move(other.entries_);
        index_ = std::move(other.index_);
    }
    return *this;
}

nlohmann::json cassette_to_json(const std::vector<CassetteEntry>& entries)
{
    auto out = nlohmann::json::array();
    for (const auto& e : entries)
        out.push_back({{"chart_id", e.chart_id}, {"question", e.question}, {"answer", e.answer}});
    return out;
}

std::vector<CassetteEntry> cassette_from_json(const nlohmann::json& doc)
{
    if (!doc.is_array())
        throw std::runtime_error("cassette must be a JSON array");
    std::vector<CassetteEntry> out;
    for (const auto& e : doc) {
        if (!e.is_object() || !e.contains("question") || !e.contains("answer"))
            throw std::runtime_error("cassette entries need 'question' and 'answer'");
        out.push_back({e.value("chart_id", std::string{}), e["question"].get<std::string>(),
                       e["answer"].get<std::string>()});
    }
    return out;
}

RecordedSession RecordedSession::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open cassette " + path.string());
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw std::runtime_error("cassette " + path.string() + " is not valid JSON");
    return RecordedSession(cassette_from_json(doc));
}

void RecordedSession::save(const std::filesystem::path& path) const
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write cassette " + path.string());
    out << cassette_to_json(entries()).dump(2) << '\n';
}

std::optional<std::string> RecordedSession::find(const std::string& chart_id, const std::string& question) const
{
    std::lock_guard lock(mutex_);
    const auto it = index_.find({chart_id, normalize_question(question)});
    if (it == index_.end())
        return std::nullopt;
    return entries_[it->second].answer;
}

bool RecordedSession::append(CassetteEntry entry)
{
    std::lock_guard lock(mutex_);
    Key key{entry.chart_id, normalize_question(entry.question)};
    if (index_.contains(key))
        return false;
    index_.emplace(std::move(key), entries_.size());
    entries_.push_back(std::move(entry));
    return true;
}

std::vector<CassetteEntry> RecordedSession::entries() const
{
    std::lock_guard lock(mutex_);
    return entries_;
}

std::size_t RecordedSession::size() const
{
    std::lock_guard lock(mutex_);
    return entries_.size();
}

AgentAnswer replay_answer(const RecordedSession& cassette, const AgentQuery& query)
{
    if (auto hit = cassette.find(query.chart_id, query.question))
        return AgentAnswer{std::move(*hit), 0.0, "replay"};
    throw AgentError(AgentErrorKind::CassetteMiss,
                     "no recorded answer for chart '" + query.chart_id + "': " + query.question);
}

ReplayAgent::ReplayAgent(RecordedSession& cassette, ReplayMode mode, Agent* live)
    : cassette_(cassette)
    , mode_(mode)
    , live_(live)
{
    if (mode_ == ReplayMode::Record && live_ == nullptr)
        throw std::invalid_argument("record mode needs a live backend");
}

AgentAnswer ReplayAgent::answer(const AgentQuery& query)
{
    if (auto hit = cassette_.find(query.chart_id, query.question))
        return AgentAnswer{std::move(*hit), 0.0, "replay"};
    if (mode_ == ReplayMode::Strict)
        return replay_answer(cassette_, query);
    AgentAnswer live = live_->answer(query);
    cassette_.append({query.chart_id, query.question, live.answer});
    return live;
}

} // namespace solvechart::agents
