// SPDX-License-Identifier: Apache-2.0
// Loader for the 20-item comparison fixture shared by unit and acceptance tests.

#pragma once

#include <solvechart/agents/backends.hpp>
#include <solvechart/agents/chart_table.hpp>
#include <solvechart/eval/eval.hpp>

#include <filesystem>
#include <memory>

namespace solvechart::testing {

struct ModeComparisonFixture {
    std::filesystem::path dir;
    std::vector<eval::EvalItem> items;
    std::unique_ptr<agents::OracleAgent> oracle;
    std::filesystem::path llm_cassette;
};

inline ModeComparisonFixture load_mode_comparison(const std::filesystem::path& dir)
{
    ModeComparisonFixture f;
    f.dir = dir;
    f.items = eval::load_dataset(dir / "dataset.jsonl");
    f.oracle = std::make_unique<agents::OracleAgent>();
    for (const auto& item : f.items)
        f.oracle->add_table(item.chart_id, agents::load_chart_table(*item.table_path));
    f.llm_cassette = dir / "llm_cassette.json";
    return f;
}

} // namespace solvechart::testing
