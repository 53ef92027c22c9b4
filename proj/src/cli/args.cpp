// SPDX-License-Identifier: Apache-2.0

#include <solvechart/cli/cli.hpp>

#include <algorithm>
#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace solvechart::cli {

namespace {

void add_agent_options(CLI::App* sub, AgentSpec& spec)
{
    sub->add_option("--agent", spec.kind, "Answer backend")->check(CLI::IsMember({"oracle", "http", "replay"}));
    sub->add_option("--endpoint", spec.endpoint, "HTTP agent base URL");
    sub->add_option("--agent-cassette", spec.cassette, "Agent cassette to replay");
    sub->add_option("--record", spec.record_path, "Record live agent answers to this cassette");
    sub->add_option("--timeout-ms", spec.timeout_ms, "HTTP agent timeout")->check(CLI::PositiveNumber);
}

void add_llm_options(CLI::App* sub, LlmSpec& spec)
{
    sub->add_option("--llm-endpoint", spec.endpoint, "OpenAI-compatible endpoint");
    sub->add_option("--model", spec.model, "Model name");
    sub->add_option("--temperature", spec.temperature)->check(CLI::NonNegativeNumber);
    sub->add_option("--max-tokens", spec.max_tokens)->check(CLI::PositiveNumber);
    sub->add_option("--replay", spec.replay_path, "LLM cassette to replay");
    sub->add_option("--record-llm", spec.record_path, "Record LLM completions to this cassette");
}

void add_ablation_flags(CLI::App* sub, bool& vp, bool& intra, bool& cross)
{
    sub->add_flag("--disable-vp-alignment", vp, "Replace V with seeded noise");
    sub->add_flag("--disable-intra", intra, "Skip restricted attention");
    sub->add_flag("--disable-cross", cross, "Skip query annotation");
}

nlohmann::json load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file " + path);
    auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw UsageError("config file must hold a JSON object: " + path);
    return doc;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag)
{
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

void inject(std::vector<std::string>& args, CLI::App* sub, const nlohmann::json& values)
{
    std::vector<std::string> extra;
    for (const auto& [key, value] : values.items()) {
        if (value.is_object())
            continue;
        const std::string flag = "--" + key;
        if (!sub->get_option_no_throw(flag) || has_flag(args, flag))
            continue;
        if (value.is_boolean()) {
            if (value.get<bool>())
                extra.push_back(flag);
        } else if (value.is_string()) {
            extra.push_back(flag);
            extra.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            extra.push_back(flag);
            extra.push_back(value.dump());
        } else {
            throw UsageError("config value for \"" + key + "\" must be a string, number or boolean");
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text)
{
    const auto x = text.find('x');
    try {
        if (x == std::string::npos)
            throw std::invalid_argument(text);
        std::size_t used = 0;
        const auto r = std::stoul(text.substr(0, x), &used);
        if (used != x)
            throw std::invalid_argument(text);
        const auto c = std::stoul(text.substr(x + 1), &used);
        if (used != text.size() - x - 1 || r == 0 || c == 0)
            throw std::invalid_argument(text);
        return {r, c};
    } catch (const std::logic_error&) {
        throw UsageError("--grid expects ROWSxCOLS, got \"" + text + "\"");
    }
}

CLI::App* deepest_parsed(CLI::App* app)
{
    for (CLI::App* sub : app->get_subcommands())
        return deepest_parsed(sub);
    return app;
}

} // namespace

Command parse_args(const std::vector<std::string>& input)
{
    std::vector<std::string> args;
    std::string config_path;
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (input[i] == "--config") {
            if (i + 1 >= input.size())
                throw UsageError("--config needs a path");
            config_path = input[++i];
        } else if (input[i].rfind("--config=", 0) == 0) {
            config_path = input[i].substr(9);
        } else {
            args.push_back(input[i]);
        }
    }

    CLI::App app{"Chart question answering with solution programs", "solvechart"};
    app.require_subcommand(1);
    app.fallthrough(false);

    ParseCommand parse_cmd;
    auto* parse = app.add_subcommand("parse", "Parse a solution program and print its canonical form");
    parse->add_option("file,--file", parse_cmd.file, "Program file, or - for standard input")->required();
    parse->add_flag("--canonical", parse_cmd.canonical_only, "Print only the canonical program text");

    RunCommand run_cmd;
    auto* run = app.add_subcommand("run", "Execute a solution program against an agent");
    run->add_option("--program", run_cmd.program, "Program file")->required();
    run->add_option("--table", run_cmd.table, "Chart table JSON for the oracle");
    add_agent_options(run, run_cmd.agent);
    run->add_option("--question", run_cmd.question, "Original question, used by --fallback");
    run->add_option("--chart-id", run_cmd.chart_id);
    run->add_flag("--fallback", run_cmd.fallback, "On engine error, ASK the original question");
    run->add_option("--trace", run_cmd.trace_path, "Write the execution trace JSON here");
    run->add_flag("--json", run_cmd.json, "Print a JSON result instead of the bare answer");

    SolveCommand solve_cmd;
    bool solve_no_fallback = false;
    auto* solve = app.add_subcommand("solve", "Answer one question end to end");
    solve->add_option("--question", solve_cmd.question)->required();
    solve->add_option("--table", solve_cmd.table, "Chart table JSON for the oracle");
    solve->add_option("--chart-id", solve_cmd.chart_id);
    solve->add_option("--mode", solve_cmd.mode)->check(CLI::IsMember({"agent_only", "programmatic"}));
    add_agent_options(solve, solve_cmd.agent);
    add_llm_options(solve, solve_cmd.llm);
    solve->add_flag("--no-fallback", solve_no_fallback, "Fail instead of falling back to ASK");
    solve->add_option("--trace", solve_cmd.trace_path, "Write the execution trace JSON here");
    solve->add_flag("--json", solve_cmd.json, "Print a JSON result instead of the bare answer");

    AlignDemoCommand align_cmd;
    std::string grid = "3x3";
    bool summary_only = false;
    auto add_align = [&](CLI::App* sub) {
        sub->add_option("--grid", grid, "Patch grid ROWSxCOLS");
        sub->add_option("--dim", align_cmd.dim, "Embedding width")->check(CLI::PositiveNumber);
        sub->add_option("--seed", align_cmd.seed);
        sub->add_option("--layers", align_cmd.layers);
        sub->add_option("--threshold", align_cmd.threshold, "Linkage distance threshold")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--k-max", align_cmd.k_max, "Upper bound on the cluster count")->check(CLI::PositiveNumber);
        sub->add_flag("--summary", summary_only, "Omit the matrices from the output");
        add_ablation_flags(sub, align_cmd.vp_alignment_off, align_cmd.intra_off, align_cmd.cross_off);
    };
    auto* align = app.add_subcommand("align", "Alignment core utilities");
    align->require_subcommand(1);
    auto* align_demo = align->add_subcommand("demo", "Run the alignment pipeline on a synthetic grid");
    add_align(align_demo);
    auto* align_demo_alias = app.add_subcommand("align-demo", "Same as `align demo`");
    add_align(align_demo_alias);

    EvalCommand eval_cmd;
    bool eval_no_fallback = false;
    auto* eval = app.add_subcommand("eval", "Evaluate a JSONL dataset");
    eval->add_option("--dataset", eval_cmd.dataset)->required();
    eval->add_option("--mode", eval_cmd.mode)->check(CLI::IsMember({"agent_only", "programmatic"}));
    add_agent_options(eval, eval_cmd.agent);
    add_llm_options(eval, eval_cmd.llm);
    eval->add_option("--workers", eval_cmd.workers)->check(CLI::PositiveNumber);
    eval->add_option("--output", eval_cmd.output, "Write the report JSON here instead of stdout");
    eval->add_option("--trace-dir", eval_cmd.trace_dir, "Write one trace per item into this directory");
    eval->add_option("--tolerance", eval_cmd.tolerance)->check(CLI::NonNegativeNumber);
    eval->add_flag("--no-fallback", eval_no_fallback, "Fail items instead of falling back to ASK");
    eval->add_flag("--summary", eval_cmd.summary, "Print a plain-text summary table");
    add_ablation_flags(eval, eval_cmd.vp_alignment_off, eval_cmd.intra_off, eval_cmd.cross_off);

    if (!args.empty() && args[0].rfind("-", 0) != 0 && !app.get_subcommand_no_throw(args[0]))
        throw UsageError("unknown subcommand \"" + args[0] + "\"");

    if (!config_path.empty() && !args.empty()) {
        const auto config = load_config(config_path);
        CLI::App* target = app.get_subcommand_no_throw(args[0]);
        std::string section = args[0];
        if (target == align && args.size() > 1 && args[1] == "demo") {
            target = align_demo;
            section = "align-demo";
        }
        if (target) {
            if (const auto it = config.find(section); it != config.end() && it->is_object())
                inject(args, target, *it);
            inject(args, target, config);
        }
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{deepest_parsed(&app)->help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (parse->parsed())
        return parse_cmd;
    if (run->parsed()) {
        if (run_cmd.agent.kind == "oracle" && run_cmd.table.empty())
            throw UsageError("run: --agent oracle needs --table");
        return run_cmd;
    }
    if (solve->parsed()) {
        solve_cmd.fallback = !solve_no_fallback;
        if (solve_cmd.mode == "programmatic" && solve_cmd.llm.endpoint.empty() && solve_cmd.llm.replay_path.empty())
            throw UsageError("solve: programmatic mode needs --llm-endpoint or --replay");
        if (solve_cmd.agent.kind == "oracle" && solve_cmd.table.empty())
            throw UsageError("solve: --agent oracle needs --table");
        return solve_cmd;
    }
    if (align_demo->parsed() || align_demo_alias->parsed()) {
        std::tie(align_cmd.rows, align_cmd.cols) = parse_grid(grid);
        align_cmd.full = !summary_only;
        return align_cmd;
    }
    if (eval->parsed()) {
        eval_cmd.fallback = !eval_no_fallback;
        if (eval_cmd.mode == "programmatic" && eval_cmd.llm.endpoint.empty() && eval_cmd.llm.replay_path.empty())
            throw UsageError("eval: programmatic mode needs --llm-endpoint or --replay");
        return eval_cmd;
    }
    throw UsageError("exactly one subcommand is required");
}

} // namespace solvechart::cli
