// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <solvechart/agents/agent.hpp>
#include <solvechart/solgen/solgen.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace solvechart::eval {

struct EvalItem {
    std::string id;
    std::string question;
    std::string gold;
    std::string chart_id;
    std::optional<std::filesystem::path> table_path; // resolved against the dataset directory
    bool operator==(const EvalItem&) const = default;
};

class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message)
        , line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateIdError : public std::runtime_error {
public:
    explicit DuplicateIdError(const std::string& id)
        : std::runtime_error("duplicate item id \"" + id + "\"")
        , id_(id)
    {
    }
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// JSONL, one object per non-blank line. Order preserved.
std::vector<EvalItem> load_dataset(const std::filesystem::path& path);
std::vector<EvalItem> parse_dataset(std::string_view text, const std::filesystem::path& base_dir = {});

inline constexpr double kDefaultTolerance = 0.05;

/// Numeric when both sides coerce (relative tolerance, exact at gold 0);
/// comma lists compare element-wise; otherwise trimmed case-insensitive text.
bool relaxed_match(std::string_view prediction, std::string_view gold, double tolerance = kDefaultTolerance);

enum class Mode { AgentOnly, Programmatic };
std::string_view mode_name(Mode mode);
std::optional<Mode> mode_from_name(std::string_view name);

struct AlignFlags {
    bool vp_alignment_off = false;
    bool intra_off = false;
    bool cross_off = false;
    bool operator==(const AlignFlags&) const = default;
};

struct EvalConfig {
    Mode mode = Mode::AgentOnly;
    bool fallback_to_ask = true;
    double tolerance = kDefaultTolerance;
    AlignFlags align;
    std::size_t workers = 1;
    std::optional<std::filesystem::path> trace_dir; // one trace JSON per item when set
};

struct ItemResult {
    std::string id;
    std::string prediction;
    bool correct = false;
    Mode mode = Mode::AgentOnly;
    bool fallback_used = false;
    std::string error; // empty on success
    std::optional<std::string> trace_path;
    bool operator==(const ItemResult&) const = default;
};

struct EvalReport {
    std::vector<ItemResult> items;
    double accuracy = 0.0;
    std::size_t correct = 0;
    std::vector<std::string> warnings;
    nlohmann::json config;
};

/// `llm` is required in programmatic mode. Backends are shared across workers.
EvalReport run_eval(const std::vector<EvalItem>& items, const EvalConfig& config, agents::Agent& agent,
                    solgen::ChatClient* llm = nullptr);

/// Backend-independent snapshot, so record and replay runs produce identical reports.
nlohmann::json config_snapshot(const EvalConfig& config);
nlohmann::json report_to_json(const EvalReport& report);
std::string summary_table(const EvalReport& report);

} // namespace solvechart::eval
