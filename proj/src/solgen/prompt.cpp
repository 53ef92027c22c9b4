// SPDX-License-Identifier: Apache-2.0

#include <solvechart/solgen/solgen.hpp>

#include <stdexcept>

namespace solvechart::solgen {

namespace detail {
std::string_view solution_prompt_asset();
}

std::string_view system_prompt() { return detail::solution_prompt_asset(); }

PromptBundle build_prompt(const std::string& question, const std::optional<ChartHints>& hints)
{
    if (question.find_first_not_of(" \t\r\n") == std::string::npos)
        throw std::invalid_argument("question must be non-empty");

    PromptBundle out;
    out.system = std::string(system_prompt());
    out.user = "Question: " + question + "\n";
    if (hints) {
        if (!hints->title.empty())
            out.user += "Chart title: " + hints->title + "\n";
        if (!hints->x_label.empty())
            out.user += "X axis: " + hints->x_label + "\n";
        if (!hints->y_label.empty())
            out.user += "Y axis: " + hints->y_label + "\n";
        if (!hints->series.empty()) {
            out.user += "Series:";
            for (std::size_t i = 0; i < hints->series.size(); ++i)
                out.user += (i == 0 ? " " : ", ") + hints->series[i];
            out.user += "\n";
        }
    }
    out.user += "Write the solution program.";
    return out;
}

} // namespace solvechart::solgen
