// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/backends.hpp>
#include <solvechart/agents/templates.hpp>
#include <solvechart/agents/url.hpp>

#include "http_fixture.hpp"

#include <doctest.h>

#include <filesystem>
#include <thread>

using namespace solvechart;
using namespace solvechart::agents;

namespace {

ChartTable party_chart() { return load_chart_table(SOLVECHART_FIXTURES "/party/table.json"); }

ChartTable two_series()
{
    return chart_table_from_json(nlohmann::json::parse(R"({
      "title": "t", "x_label": "Year", "y_label": "v",
      "series": [
        {"name": "A", "points": [{"category": "2019", "value": 4}, {"category": "2020", "value": 1}]},
        {"name": "B", "points": [{"category": "2019", "value": 2}, {"category": "2020", "value": 9}]}
      ]})"));
}

std::string ask(const ChartTable& t, const std::string& q, Operator op = Operator::Substep)
{
    return oracle_answer(t, {q, "c", op}).answer;
}

AgentErrorKind failure(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const AgentError& e) {
        return e.kind();
    }
    FAIL("expected AgentError");
    return AgentErrorKind::Transport;
}

// Brute-force argmax over series maxima.
std::string brute_best_series(const ChartTable& t)
{
    std::string best;
    double v = -1e300;
    for (const auto& s : t.series)
        for (const auto& p : s.points)
            if (p.value > v) {
                v = p.value;
                best = s.name;
            }
    return best;
}

struct TempDir {
    std::filesystem::path path;
    TempDir()
    {
        path = std::filesystem::temp_directory_path()
            / ("solvechart-agents-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_SUITE("agents")
{
    TEST_CASE("template matching")
    {
        auto m = match_template("What is the value of Democrat in 2012?");
        REQUIRE(m);
        CHECK(m->kind == TemplateKind::ValueOf);
        CHECK(m->series == "democrat");
        CHECK(m->category == "2012");

        m = match_template("which year has the lowest value");
        REQUIRE(m);
        CHECK(m->kind == TemplateKind::ArgExtremeCategory);
        CHECK(m->extreme == Extreme::Lowest);

        m = match_template("Which series has the highest value?");
        REQUIRE(m);
        CHECK(m->kind == TemplateKind::ArgExtremeSeries);

        m = match_template("What is the highest value of Sales?");
        REQUIRE(m);
        CHECK(m->kind == TemplateKind::ExtremeOfSeries);
        CHECK(m->series == "sales");

        m = match_template("What is the difference between Republican and Democrat in 2012?");
        REQUIRE(m);
        CHECK(m->kind == TemplateKind::DifferenceOfCells);

        CHECK_FALSE(match_template("compare the trends"));
        CHECK_FALSE(match_template("what is the capital of France"));
    }

    TEST_CASE("normalize and vocabulary matching")
    {
        CHECK(normalize_phrase("  What's   the VALUE?? ") == "what s the value");
        const std::vector<std::string> vocab = {"Democrat", "Democrat Party", "Rep"};
        CHECK(longest_vocabulary_match("the democrat party in 2012", vocab) == 1u);
        CHECK(longest_vocabulary_match("democrats", vocab) == std::nullopt);
        CHECK(longest_vocabulary_match("reporting", vocab) == std::nullopt);
    }

    TEST_CASE("oracle answers")
    {
        const auto t = party_chart();
        CHECK(ask(t, "what is the value of Republican in 2012") == "50");
        CHECK(ask(t, "what is the value of Democrat in 2012") == "43");
        CHECK(ask(t, "What was the value of republican at 2010?") == "47");
        CHECK(ask(t, "what is the highest value of Democrat") == "51");
        CHECK(ask(t, "what is the sum of Republican in 2012 and Democrat in 2012") == "93");
        CHECK(ask(t, "what is the difference between Republican and Democrat in 2012") == "7");
        CHECK(ask(t, "which year has the highest value") == "2008");

        const auto two = two_series();
        CHECK(ask(two, "which series has the highest value") == "B");
        CHECK(ask(two, "which series has the highest value") == brute_best_series(two));
        CHECK(ask(two, "which series has the lowest value") == "A");

        CHECK(failure([&] { ask(t, "what is the capital of France"); }) == AgentErrorKind::Unanswerable);
        CHECK(failure([&] { ask(t, "what is the value of Green in 2012"); }) == AgentErrorKind::Unanswerable);
        CHECK(failure([&] { ask(t, "what is the value of Republican in 1999"); }) == AgentErrorKind::Unanswerable);
        CHECK(failure([&] { ask(t, "what is the value of 2012"); }) == AgentErrorKind::Unanswerable);
    }

    TEST_CASE("oracle purity and operator transparency")
    {
        const auto t = party_chart();
        for (const char* q : {"what is the value of Republican in 2012", "which year has the lowest value"}) {
            const auto a = ask(t, q, Operator::Ask);
            CHECK(ask(t, q, Operator::Substep) == a);
            CHECK(ask(t, q, Operator::Ask) == a);
        }
    }

    TEST_CASE("oracle agent routes by chart id")
    {
        OracleAgent agent(party_chart());
        agent.add_table("two", two_series());
        CHECK(agent.answer({"which series has the highest value", "two", Operator::Ask}).answer == "B");
        CHECK(agent.answer({"what is the value of Republican in 2012", "other", Operator::Ask}).answer == "50");
        OracleAgent empty;
        CHECK(failure([&] { empty.answer({"what is the value of A in 2019", "x", Operator::Ask}); })
              == AgentErrorKind::Unanswerable);
    }

    TEST_CASE("chart table validation")
    {
        CHECK_THROWS_AS(chart_table_from_json(nlohmann::json::parse(
                            R"({"series": [{"name": "A", "points": []}, {"name": "a", "points": []}]})")),
                        TableFormatError);
        CHECK_THROWS_AS(chart_table_from_json(nlohmann::json::parse(
                            R"({"series": [{"name": "A", "points": [{"category": "x", "value": 1},
                                                                    {"category": "x", "value": 2}]}]})")),
                        TableFormatError);
        CHECK_THROWS_AS(chart_table_from_json(nlohmann::json::parse(R"([1, 2])")), TableFormatError);
        const auto t = party_chart();
        CHECK(chart_table_from_json(chart_table_to_json(t)) == t);
    }

    TEST_CASE("endpoint splitting")
    {
        CHECK(split_endpoint("http://host:8080/base/").origin == "http://host:8080");
        CHECK(split_endpoint("http://host:8080/base/").base_path == "/base");
        CHECK(split_endpoint("http://host").base_path.empty());
    }

    TEST_CASE("http agent protocol")
    {
        LocalServer srv;
        nlohmann::json seen;
        srv.server.Post("/answer", [&](const httplib::Request& req, httplib::Response& res) {
            seen = nlohmann::json::parse(req.body);
            res.set_content(R"({"answer":"50"})", "application/json");
        });
        srv.server.Post("/v2/answer", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"answer":"ok"})", "application/json");
        });

        const auto a = http_answer(srv.url(), {"what is the value of Republican in 2012", "c1", Operator::Substep});
        CHECK(a.answer == "50");
        CHECK(a.backend == "http");
        CHECK(a.latency_ms >= 0.0);
        CHECK(seen == nlohmann::json{{"question", "what is the value of Republican in 2012"},
                                     {"chart_id", "c1"},
                                     {"operator", "SUBSTEP"}});
        CHECK(HttpAgent(srv.url() + "/v2/").answer({"q", "c", Operator::Ask}).answer == "ok");
    }

    TEST_CASE("http agent failures")
    {
        LocalServer srv;
        srv.server.Post("/500/answer", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
        srv.server.Post("/missing/answer", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"text":"50"})", "application/json");
        });
        srv.server.Post("/garbage/answer", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("not json", "text/plain");
        });
        srv.server.Post("/empty/answer", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"answer":""})", "application/json");
        });
        srv.server.Post("/slow/answer", [](const httplib::Request&, httplib::Response& res) {
            std::this_thread::sleep_for(std::chrono::milliseconds(600));
            res.set_content(R"({"answer":"late"})", "application/json");
        });

        const AgentQuery q{"q", "c", Operator::Ask};
        CHECK(failure([&] { http_answer(srv.url() + "/500", q); }) == AgentErrorKind::Transport);
        CHECK(failure([&] { http_answer(srv.url() + "/missing", q); }) == AgentErrorKind::BadResponse);
        CHECK(failure([&] { http_answer(srv.url() + "/garbage", q); }) == AgentErrorKind::BadResponse);
        CHECK(failure([&] { http_answer(srv.url() + "/empty", q); }) == AgentErrorKind::BadResponse);
        CHECK(failure([&] { http_answer(srv.url() + "/slow", q, std::chrono::milliseconds(150)); })
              == AgentErrorKind::Timeout);
        CHECK(failure([&] { http_answer(closed_endpoint(), q); }) == AgentErrorKind::Transport);
    }

    TEST_CASE("replay: strict hit, strict miss, record")
    {
        RecordedSession cassette({{"c1", "What is the value of  Republican in 2012", "50"}});
        CHECK(replay_answer(cassette, {"what is the value of republican in 2012", "c1", Operator::Ask}).answer == "50");
        CHECK(failure([&] { replay_answer(cassette, {"other", "c1", Operator::Ask}); }) == AgentErrorKind::CassetteMiss);
        CHECK(failure([&] { replay_answer(cassette, {"what is the value of republican in 2012", "c2", Operator::Ask}); })
              == AgentErrorKind::CassetteMiss);

        OracleAgent live(party_chart());
        ReplayAgent recorder(cassette, ReplayMode::Record, &live);
        CHECK(recorder.answer({"what is the value of Democrat in 2012", "c1", Operator::Substep}).answer == "43");
        CHECK(cassette.size() == 2);
        CHECK(recorder.answer({"What is the value of Democrat in 2012", "c1", Operator::Ask}).answer == "43");
        CHECK(cassette.size() == 2);

        ReplayAgent strict(cassette, ReplayMode::Strict);
        CHECK(strict.answer({"what is the value of Democrat in 2012", "c1", Operator::Ask}).answer == "43");
        CHECK(failure([&] { strict.answer({"unseen", "c1", Operator::Ask}); }) == AgentErrorKind::CassetteMiss);
    }

    TEST_CASE("cassette files round-trip and keep the first entry")
    {
        TempDir dir;
        RecordedSession s({{"c", "q", "1"}, {"c", "Q ", "2"}, {"d", "q", "3"}});
        CHECK(s.size() == 2);
        CHECK(s.find("c", "q") == "1");
        const auto path = dir.path / "cassette.json";
        s.save(path);
        const auto doc = nlohmann::json::parse(std::ifstream(path));
        CHECK(doc.is_array());
        CHECK(doc[0] == nlohmann::json{{"chart_id", "c"}, {"question", "q"}, {"answer", "1"}});
        CHECK(RecordedSession::load(path).entries() == s.entries());
    }

    TEST_CASE("record mode is safe under concurrent queries")
    {
        RecordedSession cassette;
        OracleAgent live(party_chart());
        ReplayAgent recorder(cassette, ReplayMode::Record, &live);
        const std::vector<std::string> qs = {"what is the value of Republican in 2012", "what is the value of Democrat in 2012",
                                             "what is the value of Republican in 2008", "what is the value of Democrat in 2010"};
        std::vector<std::thread> pool;
        for (int t = 0; t < 8; ++t)
            pool.emplace_back([&, t] {
                for (int i = 0; i < 50; ++i)
                    recorder.answer({qs[(t + i) % qs.size()], "c", Operator::Ask});
            });
        for (auto& t : pool)
            t.join();
        CHECK(cassette.size() == qs.size());
    }
}
