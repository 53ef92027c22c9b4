// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace solvechart::agents {

enum class TemplateKind {
    ValueOf,             // value of <series> in <category>
    ValueOfCategory,     // value of <category>, single-series charts
    ExtremeOfSeries,     // highest/lowest value of <series>
    ArgExtremeSeries,    // which series has the highest/lowest value
    ArgExtremeCategory,  // which <year|category|...> has the highest/lowest value
    SumOfCells,          // sum of <cell> and <cell>
    DifferenceOfCells,   // difference between <cell> and <cell>
};

enum class Extreme { Highest, Lowest };

std::string_view template_kind_name(TemplateKind kind);

/// Slots hold normalized phrases; they are resolved against the table
/// vocabulary when the oracle answers.
struct TemplateMatch {
    TemplateKind kind;
    Extreme extreme = Extreme::Highest;
    std::string series;
    std::string category;
    std::string second_series;
    std::string second_category;
    bool operator==(const TemplateMatch&) const = default;
};

/// Lowercase, ASCII punctuation to spaces, runs of spaces collapsed, trimmed.
std::string normalize_phrase(std::string_view text);

/// Empty when the question is outside the closed template set.
std::optional<TemplateMatch> match_template(std::string_view question);

/// Longest vocabulary entry occurring in `phrase` on word boundaries, compared
/// after normalization. Ties go to the earlier entry. Returns its index.
std::optional<std::size_t> longest_vocabulary_match(std::string_view phrase,
                                                    const std::vector<std::string>& vocabulary);

} // namespace solvechart::agents
