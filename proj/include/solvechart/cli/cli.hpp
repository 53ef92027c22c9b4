// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace solvechart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `--help` anywhere: the rendered usage text, printed with exit 0.
struct HelpRequested {
    std::string text;
};

/// Where agent answers come from. `record_path` wraps the live backend.
struct AgentSpec {
    std::string kind = "oracle"; // oracle | http | replay
    std::string endpoint;
    std::string cassette;    // replay source
    std::string record_path; // record live answers here
    int timeout_ms = 30000;
};

struct LlmSpec {
    std::string endpoint;
    std::string model = "Qwen2-7B-Instruct";
    double temperature = 0.0;
    int max_tokens = 512;
    std::string replay_path; // LLM cassette
    std::string record_path;
};

struct ParseCommand {
    std::string file;
    bool canonical_only = false;
};

struct RunCommand {
    std::string program;
    std::string table;
    AgentSpec agent;
    std::string question; // used by the ASK fallback
    std::string chart_id;
    bool fallback = false;
    std::string trace_path;
    bool json = false;
};

struct SolveCommand {
    std::string question;
    std::string table;
    std::string chart_id;
    std::string mode = "programmatic";
    AgentSpec agent;
    LlmSpec llm;
    bool fallback = true;
    std::string trace_path;
    bool json = false;
};

struct AlignDemoCommand {
    std::size_t rows = 3;
    std::size_t cols = 3;
    std::size_t dim = 16;
    std::uint64_t seed = 0;
    std::size_t layers = 2;
    double threshold = 0.35;
    std::size_t k_max = 12;
    bool vp_alignment_off = false;
    bool intra_off = false;
    bool cross_off = false;
    bool full = true; // include matrices in the output
};

struct EvalCommand {
    std::string dataset;
    std::string mode = "agent_only";
    AgentSpec agent;
    LlmSpec llm;
    std::size_t workers = 1;
    std::string output;
    std::string trace_dir;
    double tolerance = 0.05;
    bool fallback = true;
    bool summary = false;
    bool vp_alignment_off = false;
    bool intra_off = false;
    bool cross_off = false;
};

using Command = std::variant<ParseCommand, RunCommand, SolveCommand, AlignDemoCommand, EvalCommand>;

/// argv without the program name. `--config PATH` (JSON object of flag
/// defaults, optionally nested per subcommand) is honoured; explicit flags win.
/// Throws UsageError, or HelpRequested for --help.
Command parse_args(const std::vector<std::string>& args);

/// Executes one command. Payload goes to `out`, diagnostics to `err`.
int run_command(const Command& cmd, std::ostream& out, std::ostream& err);

/// parse_args + run_command with the exit-code mapping.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace solvechart::cli
