// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/backends.hpp>
#include <solvechart/align/align.hpp>
#include <solvechart/cli/cli.hpp>
#include <solvechart/dsl/parser.hpp>
#include <solvechart/engine/interpreter.hpp>
#include <solvechart/eval/eval.hpp>
#include <solvechart/solgen/solgen.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>

namespace solvechart::cli {

namespace {

std::string read_file(const std::string& path)
{
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

void report_warnings(const dsl::SolutionProgram& program, std::ostream& err)
{
    for (const auto& w : program.warnings)
        err << "warning: " << w.code << ": " << w.message << '\n';
}

/// Owns the live backend and an optional cassette layered on top of it.
class AgentStack {
public:
    AgentStack(const AgentSpec& spec, std::unique_ptr<agents::Agent> oracle)
    {
        if (spec.kind == "replay") {
            if (spec.cassette.empty())
                throw UsageError("--agent replay needs --agent-cassette");
            session_ = std::make_unique<agents::RecordedSession>(agents::RecordedSession::load(spec.cassette));
            replay_ = std::make_unique<agents::ReplayAgent>(*session_, agents::ReplayMode::Strict);
            top_ = replay_.get();
            return;
        }
        if (spec.kind == "http") {
            if (spec.endpoint.empty())
                throw UsageError("--agent http needs --endpoint");
            live_ = std::make_unique<agents::HttpAgent>(spec.endpoint, std::chrono::milliseconds(spec.timeout_ms));
        } else {
            live_ = std::move(oracle);
        }
        top_ = live_.get();
        if (!spec.record_path.empty()) {
            record_path_ = spec.record_path;
            session_ = std::make_unique<agents::RecordedSession>(
                std::filesystem::exists(record_path_) ? agents::RecordedSession::load(record_path_)
                                                      : agents::RecordedSession{});
            replay_ = std::make_unique<agents::ReplayAgent>(*session_, agents::ReplayMode::Record, live_.get());
            top_ = replay_.get();
        }
    }

    ~AgentStack()
    {
        if (!record_path_.empty()) {
            try {
                session_->save(record_path_);
            } catch (...) {
            }
        }
    }

    agents::Agent& agent() { return *top_; }

private:
    std::unique_ptr<agents::Agent> live_;
    std::unique_ptr<agents::RecordedSession> session_;
    std::unique_ptr<agents::ReplayAgent> replay_;
    agents::Agent* top_ = nullptr;
    std::string record_path_;
};

std::unique_ptr<agents::Agent> oracle_for_table(const std::string& table)
{
    if (table.empty())
        return std::make_unique<agents::OracleAgent>();
    return std::make_unique<agents::OracleAgent>(agents::load_chart_table(table));
}

class LlmStack {
public:
    explicit LlmStack(const LlmSpec& spec)
    {
        if (!spec.replay_path.empty() && !spec.record_path.empty())
            throw UsageError("--replay and --record-llm are mutually exclusive");
        if (!spec.endpoint.empty()) {
            auto config = solgen::LlmConfig::from_environment(spec.endpoint);
            config.model = spec.model;
            config.temperature = spec.temperature;
            config.max_tokens = spec.max_tokens;
            live_ = std::make_unique<solgen::OpenAiChatClient>(std::move(config));
            top_ = live_.get();
        }
        if (!spec.replay_path.empty()) {
            cassette_ = std::make_unique<solgen::CassetteChatClient>(load(spec.replay_path), nullptr);
            top_ = cassette_.get();
        } else if (!spec.record_path.empty()) {
            if (!live_)
                throw UsageError("--record-llm needs --llm-endpoint");
            record_path_ = spec.record_path;
            auto entries = std::filesystem::exists(record_path_) ? load(record_path_)
                                                                 : std::vector<solgen::LlmCassetteEntry>{};
            cassette_ = std::make_unique<solgen::CassetteChatClient>(std::move(entries), live_.get());
            top_ = cassette_.get();
        }
    }

    ~LlmStack()
    {
        if (!record_path_.empty()) {
            try {
                cassette_->save(record_path_);
            } catch (...) {
            }
        }
    }

    solgen::ChatClient* client() { return top_; }

private:
    static std::vector<solgen::LlmCassetteEntry> load(const std::string& path)
    {
        const auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
        if (doc.is_discarded())
            throw std::runtime_error("LLM cassette is not valid JSON: " + path);
        return solgen::llm_cassette_from_json(doc);
    }

    std::unique_ptr<solgen::OpenAiChatClient> live_;
    std::unique_ptr<solgen::CassetteChatClient> cassette_;
    solgen::ChatClient* top_ = nullptr;
    std::string record_path_;
};

nlohmann::json result_json(const dsl::SolutionProgram& program, const engine::ExecutionResult& result)
{
    return {
        {"answer", engine::stringify(result.answer)},
        {"value", engine::value_to_json(result.answer)},
        {"fallback_used", result.fallback_used},
        {"program", dsl::format_program(program)},
        {"trace", engine::trace_to_json(result.trace)},
    };
}

void emit_result(const dsl::SolutionProgram& program, const engine::ExecutionResult& result, bool json,
                 const std::string& trace_path, std::ostream& out)
{
    const auto doc = result_json(program, result);
    if (!trace_path.empty())
        write_file(trace_path, doc.dump(2) + "\n");
    if (json)
        out << doc.dump() << '\n';
    else
        out << engine::stringify(result.answer) << '\n';
}

int do_parse(const ParseCommand& cmd, std::ostream& out, std::ostream& err)
{
    const auto program = dsl::parse_program(read_file(cmd.file));
    report_warnings(program, err);
    if (cmd.canonical_only) {
        out << dsl::format_program(program);
        return kExitOk;
    }
    auto warnings = nlohmann::json::array();
    for (const auto& w : program.warnings)
        warnings.push_back({{"code", w.code}, {"message", w.message}});
    out << nlohmann::json{{"canonical", dsl::format_program(program)},
                          {"source_hash", program.source_hash},
                          {"nodes", dsl::node_count(program)},
                          {"warnings", warnings}}
               .dump()
        << '\n';
    return kExitOk;
}

int do_run(const RunCommand& cmd, std::ostream& out, std::ostream& err)
{
    const auto program = dsl::parse_program(read_file(cmd.program));
    report_warnings(program, err);
    if (cmd.fallback && cmd.question.empty())
        throw UsageError("--fallback needs --question");
    AgentStack stack(cmd.agent, oracle_for_table(cmd.table));
    engine::EngineConfig config{cmd.fallback, cmd.question, cmd.chart_id};
    const auto result = engine::execute(program, stack.agent(), config);
    if (result.fallback_used)
        err << "note: program failed, answered by ASK fallback\n";
    emit_result(program, result, cmd.json, cmd.trace_path, out);
    return kExitOk;
}

int do_solve(const SolveCommand& cmd, std::ostream& out, std::ostream& err)
{
    AgentStack stack(cmd.agent, oracle_for_table(cmd.table));
    dsl::SolutionProgram program;
    if (cmd.mode == "agent_only") {
        program.statements.push_back(dsl::build::assign(
            std::string(dsl::kAnswerVariable), dsl::build::call(dsl::Callee::Ask, {dsl::build::text(cmd.question)})));
    } else {
        LlmStack llm(cmd.llm);
        program = solgen::generate_solution(cmd.question, *llm.client(), std::nullopt, cmd.chart_id);
        report_warnings(program, err);
    }
    engine::EngineConfig config{cmd.fallback, cmd.question, cmd.chart_id};
    const auto result = engine::execute(program, stack.agent(), config);
    if (result.fallback_used)
        err << "note: program failed, answered by ASK fallback\n";
    emit_result(program, result, cmd.json, cmd.trace_path, out);
    return kExitOk;
}

int do_align(const AlignDemoCommand& cmd, std::ostream& out, std::ostream& err)
{
    const auto inst = align::synthetic_instance(cmd.rows, cmd.cols, cmd.dim, cmd.seed, cmd.layers);
    align::PipelineConfig config;
    config.clustering = {cmd.threshold, cmd.k_max};
    config.layers = cmd.layers;
    config.vp_alignment_off = cmd.vp_alignment_off;
    config.intra_off = cmd.intra_off;
    config.cross_off = cmd.cross_off;
    config.noise_seed = cmd.seed;

    const auto bundle = align::run_alignment_pipeline(inst.grid, inst.query, inst.params, config);
    const auto checks = align::check_invariants(bundle, inst.grid, inst.params);
    for (const auto& c : checks) {
        if (!c.passed)
            err << "invariant failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
    }

    nlohmann::json doc = {
        {"config",
         {{"rows", cmd.rows},
          {"cols", cmd.cols},
          {"dim", cmd.dim},
          {"seed", cmd.seed},
          {"layers", cmd.layers},
          {"threshold", cmd.threshold},
          {"k_max", cmd.k_max},
          {"vp_alignment_off", cmd.vp_alignment_off},
          {"intra_off", cmd.intra_off},
          {"cross_off", cmd.cross_off}}},
        {"invariants", align::checks_to_json(checks)},
        {"shape_checks_passed", align::all_passed(checks, align::CheckCategory::Shape)},
        {"all_checks_passed", align::all_passed(checks)},
    };
    if (cmd.full)
        doc["bundle"] = align::bundle_to_json(bundle);
    else
        doc["bundle"] = {{"k", bundle.clusters.k}, {"labels", bundle.clusters.labels}, {"marked", bundle.marked}};
    out << doc.dump() << '\n';
    return kExitOk;
}

int do_eval(const EvalCommand& cmd, std::ostream& out, std::ostream& err)
{
    auto items = eval::load_dataset(cmd.dataset);

    auto oracle = std::make_unique<agents::OracleAgent>();
    if (cmd.agent.kind == "oracle") {
        for (auto& item : items) {
            if (!item.table_path)
                continue;
            if (item.chart_id.empty())
                item.chart_id = item.id;
            oracle->add_table(item.chart_id, agents::load_chart_table(*item.table_path));
        }
    }
    AgentStack stack(cmd.agent, std::move(oracle));

    eval::EvalConfig config;
    config.mode = *eval::mode_from_name(cmd.mode);
    config.fallback_to_ask = cmd.fallback;
    config.tolerance = cmd.tolerance;
    config.align = {cmd.vp_alignment_off, cmd.intra_off, cmd.cross_off};
    config.workers = cmd.workers;
    if (!cmd.trace_dir.empty())
        config.trace_dir = cmd.trace_dir;

    std::optional<LlmStack> llm;
    if (config.mode == eval::Mode::Programmatic)
        llm.emplace(cmd.llm);
    const auto report = eval::run_eval(items, config, stack.agent(), llm ? llm->client() : nullptr);

    for (const auto& w : report.warnings)
        err << "warning: " << w << '\n';
    for (const auto& r : report.items) {
        if (!r.error.empty())
            err << r.id << ": " << r.error << '\n';
    }

    const std::string json = eval::report_to_json(report).dump(2) + "\n";
    if (cmd.output.empty())
        out << json;
    else
        write_file(cmd.output, json);
    if (cmd.summary)
        (cmd.output.empty() ? err : out) << eval::summary_table(report);
    return kExitOk;
}

} // namespace

int run_command(const Command& cmd, std::ostream& out, std::ostream& err)
{
    return std::visit(
        [&](const auto& c) -> int {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ParseCommand>)
                return do_parse(c, out, err);
            else if constexpr (std::is_same_v<T, RunCommand>)
                return do_run(c, out, err);
            else if constexpr (std::is_same_v<T, SolveCommand>)
                return do_solve(c, out, err);
            else if constexpr (std::is_same_v<T, AlignDemoCommand>)
                return do_align(c, out, err);
            else
                return do_eval(c, out, err);
        },
        cmd);
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        return run_command(parse_args(args), out, err);
    } catch (const HelpRequested& help) {
        out << help.text;
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    } catch (const dsl::ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    }
}

} // namespace solvechart::cli
