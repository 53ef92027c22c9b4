// SPDX-License-Identifier: Apache-2.0

#include <solvechart/cli/cli.hpp>

#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace solvechart;
using namespace solvechart::cli;

namespace {

const std::string kFixtures = SOLVECHART_FIXTURES;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content)
{
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("parse_args: run")
    {
        const auto cmd = parse_args({"run", "--program", "p.sol", "--table", "t.json", "--json"});
        const auto& run = std::get<RunCommand>(cmd);
        CHECK(run.program == "p.sol");
        CHECK(run.table == "t.json");
        CHECK(run.agent.kind == "oracle");
        CHECK(run.json);
        CHECK(!run.fallback);
    }

    TEST_CASE("parse_args: align demo spellings")
    {
        const auto a = std::get<AlignDemoCommand>(parse_args({"align", "demo", "--grid", "4x5", "--seed", "9"}));
        CHECK(a.rows == 4);
        CHECK(a.cols == 5);
        CHECK(a.seed == 9);
        const auto b = std::get<AlignDemoCommand>(parse_args({"align-demo", "--disable-cross", "--summary"}));
        CHECK(b.cross_off);
        CHECK(!b.full);
        CHECK_THROWS_AS(parse_args({"align", "demo", "--grid", "4by5"}), UsageError);
    }

    TEST_CASE("parse_args: eval")
    {
        const auto e = std::get<EvalCommand>(parse_args(
            {"eval", "--dataset", "d.jsonl", "--mode", "programmatic", "--replay", "c.json", "--workers", "4", "--no-fallback"}));
        CHECK(e.mode == "programmatic");
        CHECK(e.llm.replay_path == "c.json");
        CHECK(e.workers == 4);
        CHECK(!e.fallback);
        // Programmatic mode without any LLM source is a usage error.
        CHECK_THROWS_AS(parse_args({"eval", "--dataset", "d.jsonl", "--mode", "programmatic"}), UsageError);
        CHECK_THROWS_AS(parse_args({"eval", "--dataset", "d.jsonl", "--workers", "0"}), UsageError);
    }

    TEST_CASE("parse_args: usage errors")
    {
        CHECK_THROWS_AS(parse_args({}), UsageError);
        CHECK_THROWS_AS(parse_args({"bogus"}), UsageError);
        CHECK_THROWS_AS(parse_args({"run", "--table", "t.json"}), UsageError);
        CHECK_THROWS_AS(parse_args({"run", "--program", "p.sol"}), UsageError); // oracle needs a table
        CHECK_THROWS_AS(parse_args({"run", "--program", "p.sol", "--agent", "psychic"}), UsageError);
        CHECK_THROWS_AS(parse_args({"parse", "--help"}), HelpRequested);
    }

    TEST_CASE("config file precedence: flag over config over default")
    {
        const auto cfg = temp_file("solvechart_cli_config.json",
                                   R"({"seed": 5, "dim": 4, "align-demo": {"dim": 8, "k-max": 3}, "eval": {"workers": 6}})");
        const auto a = std::get<AlignDemoCommand>(parse_args({"align", "demo", "--config", cfg.string()}));
        CHECK(a.seed == 5);
        CHECK(a.dim == 8);
        CHECK(a.k_max == 3);
        CHECK(a.layers == 2);
        const auto b =
            std::get<AlignDemoCommand>(parse_args({"align-demo", "--config", cfg.string(), "--dim", "12"}));
        CHECK(b.dim == 12);
        CHECK(b.seed == 5);
        const auto e = std::get<EvalCommand>(parse_args({"eval", "--dataset", "d", "--config", cfg.string()}));
        CHECK(e.workers == 6);
        std::filesystem::remove(cfg);
        CHECK_THROWS_AS(parse_args({"eval", "--dataset", "d", "--config", "/nonexistent.json"}), UsageError);
    }

    TEST_CASE("run prints only the answer on stdout")
    {
        const auto r = invoke({"run", "--program", kFixtures + "/party/program.sol", "--table",
                               kFixtures + "/party/table.json"});
        CHECK(r.code == kExitOk);
        CHECK(r.out == "Republican\n");
        CHECK(r.err.empty());
    }

    TEST_CASE("run --json and --trace")
    {
        const auto trace = std::filesystem::temp_directory_path() / "solvechart_cli_trace.json";
        const auto r = invoke({"run", "--program", kFixtures + "/party/program.sol", "--table",
                               kFixtures + "/party/table.json", "--json", "--trace", trace.string()});
        REQUIRE(r.code == kExitOk);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["answer"] == "Republican");
        std::ifstream in(trace);
        const auto t = nlohmann::json::parse(in);
        CHECK(t["answer"] == "Republican");
        CHECK(t["trace"].size() > 0);
        std::filesystem::remove(trace);
    }

    TEST_CASE("parse subcommand")
    {
        const auto src = temp_file("solvechart_cli_prog.sol", "answer = (1 + 2) * 3\n");
        const auto r = invoke({"parse", src.string()});
        REQUIRE(r.code == kExitOk);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["canonical"] == "answer = (1 + 2) * 3\n");
        CHECK(doc["warnings"].empty());
        const auto c = invoke({"parse", "--canonical", src.string()});
        CHECK(c.out == "answer = (1 + 2) * 3\n");

        const auto broken = temp_file("solvechart_cli_broken.sol", "answer = (1 +\n");
        const auto b = invoke({"parse", broken.string()});
        CHECK(b.code == kExitDomainError);
        CHECK(b.out.empty());
        CHECK(b.err.find("parse error") != std::string::npos);
        std::filesystem::remove(src);
        std::filesystem::remove(broken);
    }

    TEST_CASE("exit codes")
    {
        const auto usage = invoke({"frobnicate"});
        CHECK(usage.code == kExitUsage);
        CHECK(usage.out.empty());
        CHECK(!usage.err.empty());

        const auto help = invoke({"--help"});
        CHECK(help.code == kExitOk);
        CHECK(help.out.find("eval") != std::string::npos);

        const auto missing = invoke({"run", "--program", "/nonexistent.sol", "--table", kFixtures + "/party/table.json"});
        CHECK(missing.code == kExitDomainError);
        CHECK(missing.out.empty());
    }

    TEST_CASE("align demo JSON")
    {
        const auto r = invoke({"align", "demo", "--grid", "3x3", "--dim", "16", "--seed", "7"});
        REQUIRE(r.code == kExitOk);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["all_checks_passed"] == true);
        CHECK(doc["shape_checks_passed"] == true);
        CHECK(doc["bundle"]["V"].size() == 9);
        CHECK(doc["bundle"]["Oc"][0].size() == 16);

        const auto ablated = invoke({"align-demo", "--grid", "3x3", "--dim", "16", "--seed", "7", "--disable-vp-alignment", "--summary"});
        REQUIRE(ablated.code == kExitOk);
        const auto adoc = nlohmann::json::parse(ablated.out);
        CHECK(adoc["shape_checks_passed"] == true);
        CHECK(adoc["all_checks_passed"] == false);
        CHECK(!ablated.err.empty());
    }

    TEST_CASE("eval subcommand")
    {
        const auto out = std::filesystem::temp_directory_path() / "solvechart_cli_report.json";
        const auto r = invoke({"eval", "--dataset", kFixtures + "/mode_comparison/dataset.jsonl", "--mode", "programmatic",
                               "--replay", kFixtures + "/mode_comparison/llm_cassette.json", "--workers", "2", "--summary", "--output",
                               out.string()});
        REQUIRE(r.code == kExitOk);
        std::ifstream in(out);
        const auto doc = nlohmann::json::parse(in);
        CHECK(doc["accuracy"] == 1.0);
        CHECK(doc["total"] == 20);
        CHECK(r.out.find("accuracy 1.0000 (20/20)") != std::string::npos);
        std::filesystem::remove(out);

        const auto a = invoke({"eval", "--dataset", kFixtures + "/mode_comparison/dataset.jsonl"});
        REQUIRE(a.code == kExitOk);
        CHECK(nlohmann::json::parse(a.out)["accuracy"] == doctest::Approx(0.6));
    }
}
