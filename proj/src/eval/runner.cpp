// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/agent.hpp>
#include <solvechart/dsl/parser.hpp>
#include <solvechart/engine/interpreter.hpp>
#include <solvechart/eval/eval.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace solvechart::eval {

namespace {

std::string trace_file_name(const std::string& id)
{
    std::string out;
    for (char c : id) {
        const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        out.push_back(safe ? c : '_');
    }
    return out + ".trace.json";
}

dsl::SolutionProgram ask_program(const std::string& question)
{
    using namespace dsl::build;
    dsl::SolutionProgram p;
    p.statements.push_back(assign(std::string(dsl::kAnswerVariable), call(dsl::Callee::Ask, {text(question)})));
    return p;
}

ItemResult evaluate_item(const EvalItem& item, const EvalConfig& config, agents::Agent& agent,
                         solgen::ChatClient* llm)
{
    ItemResult r;
    r.id = item.id;
    r.mode = config.mode;

    std::optional<dsl::SolutionProgram> program;
    nlohmann::json trace_doc = {{"id", item.id}, {"question", item.question}, {"mode", mode_name(config.mode)}};
    try {
        if (config.mode == Mode::AgentOnly) {
            program = ask_program(item.question);
        } else {
            if (!llm)
                throw std::invalid_argument("programmatic mode needs an LLM client");
            program = solgen::generate_solution(item.question, *llm, std::nullopt, item.chart_id);
        }
        trace_doc["program"] = dsl::format_program(*program);

        engine::EngineConfig ec;
        ec.fallback_to_ask = config.fallback_to_ask;
        ec.question = item.question;
        ec.chart_id = item.chart_id;
        const auto result = engine::execute(*program, agent, ec);
        r.prediction = engine::stringify(result.answer);
        r.fallback_used = result.fallback_used;
        r.correct = relaxed_match(r.prediction, item.gold, config.tolerance);
        trace_doc["answer"] = r.prediction;
        trace_doc["fallback_used"] = r.fallback_used;
        trace_doc["trace"] = engine::trace_to_json(result.trace);
    } catch (const std::exception& ex) {
        r.error = ex.what();
        r.correct = false;
        trace_doc["error"] = r.error;
    }

    if (config.trace_dir) {
        const auto path = *config.trace_dir / trace_file_name(item.id);
        std::ofstream out(path);
        if (out) {
            out << trace_doc.dump(2) << '\n';
            r.trace_path = path.string();
        }
    }
    return r;
}

} // namespace

nlohmann::json config_snapshot(const EvalConfig& config)
{
    return {
        {"mode", mode_name(config.mode)},
        {"fallback_to_ask", config.fallback_to_ask},
        {"tolerance", config.tolerance},
        {"align", {{"vp_alignment_off", config.align.vp_alignment_off},
                   {"intra_off", config.align.intra_off},
                   {"cross_off", config.align.cross_off}}},
    };
}

EvalReport run_eval(const std::vector<EvalItem>& items, const EvalConfig& config, agents::Agent& agent,
                    solgen::ChatClient* llm)
{
    if (config.mode == Mode::Programmatic && !llm)
        throw std::invalid_argument("programmatic mode needs an LLM client or cassette");
    if (config.trace_dir)
        std::filesystem::create_directories(*config.trace_dir);

    EvalReport report;
    report.config = config_snapshot(config);
    report.items.resize(items.size());

    const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(items.size(), 1));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++)
            report.items[i] = evaluate_item(items[i], config, agent, llm);
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    for (const auto& r : report.items)
        report.correct += r.correct;
    if (items.empty())
        report.warnings.push_back("empty dataset; accuracy reported as 0");
    else
        report.accuracy = static_cast<double>(report.correct) / static_cast<double>(items.size());
    return report;
}

nlohmann::json report_to_json(const EvalReport& report)
{
    auto per_item = nlohmann::json::array();
    for (const auto& r : report.items) {
        nlohmann::json row = {
            {"id", r.id},
            {"prediction", r.prediction},
            {"correct", r.correct},
            {"mode", mode_name(r.mode)},
            {"fallback_used", r.fallback_used},
        };
        if (!r.error.empty())
            row["error"] = r.error;
        if (r.trace_path)
            row["trace_path"] = *r.trace_path;
        per_item.push_back(std::move(row));
    }
    return {
        {"accuracy", report.accuracy},
        {"correct", report.correct},
        {"total", report.items.size()},
        {"warnings", report.warnings},
        {"config", report.config},
        {"per_item", std::move(per_item)},
    };
}

std::string summary_table(const EvalReport& report)
{
    std::size_t width = 2;
    for (const auto& r : report.items)
        width = std::max(width, r.id.size());
    std::ostringstream out;
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
    out << pad("id", width) << "  ok  fb  prediction\n";
    for (const auto& r : report.items) {
        out << pad(r.id, width) << "  " << (r.correct ? "Y " : "N ") << "  " << (r.fallback_used ? "Y " : "N ") << "  "
            << (r.error.empty() ? r.prediction : "error: " + r.error) << '\n';
    }
    char acc[64];
    std::snprintf(acc, sizeof acc, "%.4f", report.accuracy);
    out << "accuracy " << acc << " (" << report.correct << "/" << report.items.size() << ")\n";
    return out.str();
}

} // namespace solvechart::eval
