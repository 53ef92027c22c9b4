// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/templates.hpp>

#include <array>
#include <cctype>
#include <regex>

namespace solvechart::agents {

namespace {

const std::string kExtremeWords = "(highest|lowest|largest|smallest|maximum|minimum|greatest|least|max|min)";

Extreme extreme_from_word(const std::string& w)
{
    static constexpr std::array low = {"lowest", "smallest", "minimum", "least", "min"};
    for (const char* l : low) {
        if (w == l)
            return Extreme::Lowest;
    }
    return Extreme::Highest;
}

bool names_series(const std::string& noun)
{
    static constexpr std::array words = {"series", "line", "legend", "group"};
    for (const char* w : words) {
        if (noun == w || noun.ends_with(std::string(" ") + w))
            return true;
    }
    return false;
}

// "<series> in <category>" split at the last " in "; category may be empty.
std::pair<std::string, std::string> split_cell(const std::string& phrase)
{
    const auto at = phrase.rfind(" in ");
    if (at == std::string::npos)
        return {phrase, {}};
    return {phrase.substr(0, at), phrase.substr(at + 4)};
}

struct Patterns {
    std::regex cells{"^(?:what is |what was |what s |calculate |compute )?(?:the )?(sum|total|difference)"
                     " (?:of|between) (?:the )?(?:values? of )?(.+) and (?:the )?(?:values? of )?(.+)$"};
    std::regex arg_extreme{"^which (.+?) (?:has|had|shows|showed) the " + kExtremeWords + "(?: values?)?$"};
    std::regex extreme_of{"^(?:what is |what was |what s )?(?:the )?" + kExtremeWords + " values? (?:of|for|in) (.+)$"};
    std::regex value_of{"^(?:what is |what was |what s )?(?:the )?value of (.+) (?:in|at|for|on) (.+)$"};
    std::regex value_of_category{"^(?:what is |what was |what s )?(?:the )?value (?:of|in|at|for|on) (.+)$"};
};

const Patterns& patterns()
{
    static const Patterns p;
    return p;
}

} // namespace

std::string_view template_kind_name(TemplateKind kind)
{
    switch (kind) {
    case TemplateKind::ValueOf: return "value_of";
    case TemplateKind::ValueOfCategory: return "value_of_category";
    case TemplateKind::ExtremeOfSeries: return "extreme_of_series";
    case TemplateKind::ArgExtremeSeries: return "arg_extreme_over_series";
    case TemplateKind::ArgExtremeCategory: return "arg_extreme_over_categories";
    case TemplateKind::SumOfCells: return "sum_of_cells";
    case TemplateKind::DifferenceOfCells: return "difference_of_cells";
    }
    return "?";
}

std::string normalize_phrase(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        // Bytes >= 0x80 are kept so non-ASCII names still match themselves.
        if (std::isalnum(c) || c >= 0x80) {
            if (pending_space && !out.empty())
                out += ' ';
            pending_space = false;
            out += static_cast<char>(std::tolower(c));
        } else {
            pending_space = true;
        }
    }
    return out;
}

std::optional<TemplateMatch> match_template(std::string_view question)
{
    const std::string q = normalize_phrase(question);
    const auto& p = patterns();
    std::smatch m;

    if (std::regex_match(q, m, p.cells)) {
        TemplateMatch t;
        t.kind = m[1] == "difference" ? TemplateKind::DifferenceOfCells : TemplateKind::SumOfCells;
        std::tie(t.series, t.category) = split_cell(m[2]);
        std::tie(t.second_series, t.second_category) = split_cell(m[3]);
        return t;
    }
    if (std::regex_match(q, m, p.arg_extreme)) {
        const std::string noun = m[1];
        TemplateMatch t;
        t.kind = names_series(noun) ? TemplateKind::ArgExtremeSeries : TemplateKind::ArgExtremeCategory;
        t.extreme = extreme_from_word(m[2]);
        return t;
    }
    if (std::regex_match(q, m, p.extreme_of)) {
        TemplateMatch t;
        t.kind = TemplateKind::ExtremeOfSeries;
        t.extreme = extreme_from_word(m[1]);
        t.series = m[2];
        return t;
    }
    if (std::regex_match(q, m, p.value_of)) {
        TemplateMatch t;
        t.kind = TemplateKind::ValueOf;
        t.series = m[1];
        t.category = m[2];
        return t;
    }
    if (std::regex_match(q, m, p.value_of_category)) {
        TemplateMatch t;
        t.kind = TemplateKind::ValueOfCategory;
        t.category = m[1];
        return t;
    }
    return std::nullopt;
}

std::optional<std::size_t> longest_vocabulary_match(std::string_view phrase, const std::vector<std::string>& vocabulary)
{
    const std::string haystack = " " + normalize_phrase(phrase) + " ";
    std::optional<std::size_t> best;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        const std::string needle = normalize_phrase(vocabulary[i]);
        if (needle.empty() || needle.size() <= best_len)
            continue;
        if (haystack.find(" " + needle + " ") != std::string::npos) {
            best = i;
            best_len = needle.size();
        }
    }
    return best;
}

} // namespace solvechart::agents
