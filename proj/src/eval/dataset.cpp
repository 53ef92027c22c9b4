// SPDX-License-Identifier: Apache-2.0

#include <solvechart/eval/eval.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace solvechart::eval {

namespace {

std::string required_text(const nlohmann::json& row, const char* field, std::size_t line)
{
    const auto it = row.find(field);
    if (it == row.end())
        throw FormatError(line, std::string("missing field \"") + field + "\"");
    if (!it->is_string())
        throw FormatError(line, std::string("field \"") + field + "\" must be a string");
    return it->get<std::string>();
}

} // namespace

std::vector<EvalItem> parse_dataset(std::string_view text, const std::filesystem::path& base_dir)
{
    std::vector<EvalItem> items;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto row = nlohmann::json::parse(raw, nullptr, false);
        if (row.is_discarded() || !row.is_object())
            throw FormatError(line, "not a JSON object");

        EvalItem item;
        item.id = required_text(row, "id", line);
        item.question = required_text(row, "question", line);
        item.gold = required_text(row, "gold", line);
        item.chart_id = row.contains("chart_id") ? required_text(row, "chart_id", line) : std::string{};
        if (const auto tp = row.find("table_path"); tp != row.end() && !tp->is_null()) {
            if (!tp->is_string())
                throw FormatError(line, "field \"table_path\" must be a string");
            std::filesystem::path p = tp->get<std::string>();
            item.table_path = p.is_absolute() ? p : base_dir / p;
        }
        if (!seen.insert(item.id).second)
            throw DuplicateIdError(item.id);
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<EvalItem> load_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open dataset " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), path.parent_path());
}

} // namespace solvechart::eval
