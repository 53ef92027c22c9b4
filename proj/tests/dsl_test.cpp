// SPDX-License-Identifier: Apache-2.0

#include <solvechart/dsl/parser.hpp>

#include "program_gen.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace solvechart;
using namespace solvechart::dsl;

namespace {

std::string party_source()
{
    std::ifstream in(SOLVECHART_FIXTURES "/party/program.sol");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::pair<TokenKind, std::string>> kinds(std::string_view src)
{
    std::vector<std::pair<TokenKind, std::string>> out;
    for (const auto& t : tokenize(src))
        out.emplace_back(t.kind, t.lexeme);
    return out;
}

int expr_depth(const Expression& e)
{
    int d = 0;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Unary>)
                d = expr_depth(*n.operand);
            else if constexpr (std::is_same_v<T, Binary>)
                d = std::max(expr_depth(*n.left), expr_depth(*n.right));
            else if constexpr (std::is_same_v<T, ListLit>) {
                for (const auto& i : n.items)
                    d = std::max(d, expr_depth(i));
            } else if constexpr (std::is_same_v<T, Call>) {
                for (const auto& a : n.args)
                    d = std::max(d, expr_depth(a));
            }
        },
        e.node);
    return d + 1;
}

int max_depth(const Block& b)
{
    int d = 0;
    for (const auto& s : b) {
        if (const auto* a = std::get_if<Assignment>(&s.node)) {
            d = std::max(d, expr_depth(a->value));
        } else {
            const auto& i = std::get<If>(s.node);
            for (const auto& br : i.branches)
                d = std::max({d, expr_depth(br.condition), max_depth(br.body)});
            if (i.else_body)
                d = std::max(d, max_depth(*i.else_body));
        }
    }
    return d;
}

int statement_count(const Block& b)
{
    int n = 0;
    for (const auto& s : b) {
        ++n;
        if (const auto* i = std::get_if<If>(&s.node)) {
            for (const auto& br : i->branches)
                n += statement_count(br.body);
            if (i->else_body)
                n += statement_count(*i->else_body);
        }
    }
    return n;
}

} // namespace

TEST_SUITE("dsl")
{
    TEST_CASE("tokenize a call statement")
    {
        using K = TokenKind;
        const auto toks = kinds("x = ASK(\"q\")");
        const std::vector<std::pair<K, std::string>> expected = {
            {K::Identifier, "x"}, {K::Operator, "="}, {K::Identifier, "ASK"}, {K::Operator, "("},
            {K::String, "\"q\""}, {K::Operator, ")"}, {K::Newline, ""},       {K::End, ""}};
        CHECK(toks == expected);
    }

    TEST_CASE("indent and dedent are balanced and positions non-decreasing")
    {
        const auto toks = tokenize("if a > 0:\n    answer = \"yes\"");
        int depth = 0, indents = 0;
        for (std::size_t i = 0; i < toks.size(); ++i) {
            if (toks[i].kind == TokenKind::Indent) {
                ++depth;
                ++indents;
                CHECK(toks[i - 1].kind == TokenKind::Newline);
            }
            if (toks[i].kind == TokenKind::Dedent)
                --depth;
            CHECK(depth >= 0);
            if (i > 0) {
                const bool ordered = toks[i - 1].line < toks[i].line
                    || (toks[i - 1].line == toks[i].line && toks[i - 1].column <= toks[i].column);
                CHECK(ordered);
            }
        }
        CHECK(indents == 1);
        CHECK(depth == 0);
    }

    TEST_CASE("comments and blank lines vanish; brackets join lines")
    {
        const auto a = kinds("# header\nx = [1,\n     2]  # trailing\n\n");
        const auto b = kinds("x = [1, 2]");
        CHECK(a == b);
    }

    TEST_CASE("lexer errors carry locations")
    {
        try {
            tokenize("v = \"unterminated");
            FAIL("expected LexError");
        } catch (const LexError& e) {
            CHECK(e.line() == 1);
            CHECK(e.column() >= 1);
        }
        CHECK_THROWS_AS(tokenize("x = 1 $ 2"), LexError);
        CHECK_THROWS_AS(tokenize("x = (1"), LexError);
        CHECK_THROWS_AS(tokenize("x = 1)"), LexError);
        CHECK_THROWS_AS(tokenize("if a:\n\tb = 1"), LexError);
        CHECK_THROWS_AS(tokenize("if a:\n    b = 1\n  c = 2"), LexError);
    }

    TEST_CASE("party program: three assignments then one if")
    {
        const auto p = parse_program(party_source());
        REQUIRE(p.statements.size() == 4);
        for (int i = 0; i < 3; ++i)
            CHECK(std::holds_alternative<Assignment>(p.statements[i].node));
        const auto& branch = std::get<If>(p.statements[3].node);
        CHECK(branch.branches.size() == 1);
        CHECK(branch.else_body.has_value());
        const auto& first = std::get<Assignment>(p.statements[0].node);
        CHECK(first.target == "rep_2012");
        const auto& call = std::get<Call>(first.value.node);
        CHECK(call.callee == Callee::Substep);
        CHECK(std::get<StringLit>(call.args[0].node).value == "what is the value of Republican in 2012");
        CHECK(p.warnings.empty());
    }

    TEST_CASE("party program formats to its canonical text")
    {
        const std::string canonical = "rep_2012 = SUBSTEP(\"what is the value of Republican in 2012\")\n"
                                      "dem_2012 = SUBSTEP(\"what is the value of Democrat in 2012\")\n"
                                      "difference_in_2012 = rep_2012 - dem_2012\n"
                                      "if difference_in_2012 > 0:\n"
                                      "    answer = \"Republican\"\n"
                                      "else:\n"
                                      "    answer = \"Democrat\"\n";
        const auto p = parse_program(party_source());
        CHECK(format_program(p) == canonical);
        CHECK(parse_program(canonical) == p);
    }

    TEST_CASE("single ASK program")
    {
        const auto p = parse_program("answer = ASK(\"Which color indicates 65+ years?\")");
        REQUIRE(p.statements.size() == 1);
        const auto& a = std::get<Assignment>(p.statements[0].node);
        CHECK(a.target == "answer");
        CHECK(std::get<Call>(a.value.node).callee == Callee::Ask);
    }

    TEST_CASE("closed callee set")
    {
        try {
            parse_program("x = FOO(\"q\")");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("unknown callee FOO") != std::string::npos);
        }
        for (const char* name : {"len", "print", "ask", "Substep", "eval"})
            CHECK_THROWS_AS(parse_program(std::string("x = ") + name + "(1)"), ParseError);
    }

    TEST_CASE("arity rules")
    {
        CHECK_THROWS_AS(parse_program("x = ASK()"), ParseError);
        CHECK_THROWS_AS(parse_program("x = SUBSTEP(\"a\", \"b\")"), ParseError);
        CHECK_THROWS_AS(parse_program("x = abs(1, 2)"), ParseError);
        CHECK_THROWS_AS(parse_program("x = round()"), ParseError);
        CHECK_THROWS_AS(parse_program("x = min()"), ParseError);
        CHECK_NOTHROW(parse_program("x = min([1])\nanswer = max(1, 2, 3)"));
    }

    TEST_CASE("minimal parentheses")
    {
        CHECK(format_program(parse_program("x = (1 + 2) * 3")) == "x = (1 + 2) * 3\n");
        CHECK(format_program(parse_program("x = 1 + (2 * 3)")) == "x = 1 + 2 * 3\n");
        CHECK(format_program(parse_program("x = 1 - (2 - 3)")) == "x = 1 - (2 - 3)\n");
        CHECK(format_program(parse_program("x = (1 - 2) - 3")) == "x = 1 - 2 - 3\n");
        CHECK(format_program(parse_program("x = not (a and b)")) == "x = not (a and b)\n");
        CHECK(format_program(parse_program("x = -(-1)")) == "x = --1\n");
        CHECK(format_program(parse_program("x = (a < b) == c")) == "x = (a < b) == c\n");
    }

    TEST_CASE("chained comparison rejected")
    {
        CHECK_THROWS_AS(parse_program("x = 1 < 2 < 3"), ParseError);
    }

    TEST_CASE("empty program formats to empty text")
    {
        const auto p = parse_program("");
        CHECK(p.statements.empty());
        CHECK(format_program(p).empty());
        CHECK(has_diagnostic(p, kAnswerUnassigned));
    }

    TEST_CASE("validation warnings")
    {
        CHECK(has_diagnostic(parse_program("x = 1"), kAnswerUnassigned));
        CHECK(has_diagnostic(parse_program("if a:\n    answer = 1"), kAnswerUnassigned));
        CHECK_FALSE(has_diagnostic(parse_program("if a:\n    answer = 1\nelse:\n    answer = 2"), kAnswerUnassigned));
        CHECK(has_diagnostic(parse_program("answer = 1\nx = 2"), kDeadCode));
        CHECK_FALSE(has_diagnostic(parse_program("answer = 1\nx = 2"), kAnswerUnassigned));
    }

    TEST_CASE("parse errors point inside the source")
    {
        const std::vector<std::string> broken = {"x = ", "x = 1 +", "if x\n    y = 1", "x = [1, 2",
                                                 "= 3",  "if a:\nb = 1", "x = 1 2", "else:\n    x = 1",
                                                 "x = \"a\" \"b\"", "answer = ASK(\"q\"", "x == 1"};
        for (const auto& src : broken) {
            CAPTURE(src);
            try {
                parse_program(src);
                FAIL("expected ParseError");
            } catch (const ParseError& e) {
                int lines = 1;
                for (char c : src)
                    lines += c == '\n';
                CHECK(e.line() >= 1);
                CHECK(e.line() <= lines + 1);
                CHECK(e.column() >= 1);
            }
        }
    }

    TEST_CASE("string escapes round-trip")
    {
        const std::string src = "x = \"a \\\"q\\\" \\\\ \\n\\t\\r\"\n";
        const auto p = parse_program(src);
        CHECK(std::get<StringLit>(std::get<Assignment>(p.statements[0].node).value.node).value == "a \"q\" \\ \n\t\r");
        CHECK(format_program(p) == src);
    }

    TEST_CASE("number literals print shortest and read back")
    {
        for (double v : {0.0, 1.0, 0.1, 2.5, 1e300, 5e-324, 123456789.125, 1e-7, 1.7976931348623157e308}) {
            const auto text = format_number_literal(v);
            CAPTURE(text);
            const auto p = parse_program("x = " + text);
            CHECK(std::get<NumberLit>(std::get<Assignment>(p.statements[0].node).value.node).value == v);
        }
    }

    TEST_CASE("source hash follows the canonical form")
    {
        const auto a = parse_program("x   =  1+2\nanswer=x");
        const auto b = parse_program("x = 1 + 2\nanswer = x  # same");
        CHECK(a.source_hash == b.source_hash);
        CHECK(a.source_hash != parse_program("x = 1 + 3\nanswer = x").source_hash);
    }

    TEST_CASE("property: parse(format(p)) == p and format is idempotent")
    {
        testing::GenOptions opt;
        opt.wild = true;
        int checked = 0;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            testing::ProgramGenerator gen(seed, opt);
            SolutionProgram p;
            p.statements = gen.program();
            REQUIRE(max_depth(p.statements) <= 5);
            REQUIRE(statement_count(p.statements) <= 8);
            const std::string text = format_program(p);
            SolutionProgram back;
            try {
                back = parse_program(text);
            } catch (const ParseError& e) {
                FAIL_CHECK("seed " << seed << ": " << e.what() << "\n" << text);
                continue;
            }
            back.source_hash.clear();
            back.warnings.clear();
            if (!(back.statements == p.statements))
                FAIL_CHECK("seed " << seed << " did not round-trip:\n" << text);
            CHECK(format_program(back) == text);
            ++checked;
        }
        CHECK(checked == 1000);
    }
}
