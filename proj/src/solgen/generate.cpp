// SPDX-License-Identifier: Apache-2.0

#include <solvechart/dsl/parser.hpp>
#include <solvechart/solgen/solgen.hpp>

namespace solvechart::solgen {

namespace {

dsl::SolutionProgram accept(const std::string& response)
{
    const std::string source = extract_program(response);
    auto program = dsl::parse_program(source);
    if (dsl::has_diagnostic(program, dsl::kAnswerUnassigned))
        throw dsl::ParseError("the program does not assign `answer` on every path", 1, 1);
    return program;
}

} // namespace

dsl::SolutionProgram generate_solution(const std::string& question, ChatClient& client,
                                       const std::optional<ChartHints>& hints, const std::string& chart_id)
{
    const PromptBundle prompt = build_prompt(question, hints);
    CompletionRequest request;
    request.messages = {{"system", prompt.system}, {"user", prompt.user}};
    request.question = question;
    request.chart_id = chart_id;

    std::string failure;
    for (int attempt = 0; attempt < 2; ++attempt) {
        request.attempt = attempt;
        const std::string response = client.complete(request);
        try {
            return accept(response);
        } catch (const std::exception& ex) {
            failure = ex.what();
            request.messages.push_back({"assistant", response});
            request.messages.push_back(
                {"user", "Your reply could not be used: " + failure
                             + "\nReply again with a corrected program in one fenced code block."});
        }
    }
    throw GenerationError(GenerationErrorKind::InvalidProgram, "no valid program after retry: " + failure);
}

} // namespace solvechart::solgen
