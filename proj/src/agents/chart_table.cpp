// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/chart_table.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

namespace solvechart::agents {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where)
{
    const auto it = obj.find(key);
    if (it == obj.end())
        return {};
    if (!it->is_string())
        throw TableFormatError(where + ": field '" + key + "' must be a string");
    return it->get<std::string>();
}

} // namespace

void validate_chart_table(const ChartTable& table)
{
    std::set<std::string> names;
    for (const auto& s : table.series) {
        if (!names.insert(lower(s.name)).second)
            throw TableFormatError("duplicate series name (case-insensitive): " + s.name);
        std::set<std::string> categories;
        for (const auto& p : s.points) {
            if (!categories.insert(p.category).second)
                throw TableFormatError("duplicate category '" + p.category + "' in series " + s.name);
            if (!std::isfinite(p.value))
                throw TableFormatError("non-finite value in series " + s.name);
        }
    }
}

ChartTable chart_table_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw TableFormatError("chart table must be a JSON object");
    ChartTable table;
    table.title = require_string(doc, "title", "table");
    table.x_label = require_string(doc, "x_label", "table");
    table.y_label = require_string(doc, "y_label", "table");
    const auto series = doc.find("series");
    if (series == doc.end() || !series->is_array())
        throw TableFormatError("table: 'series' must be an array");
    for (const auto& s : *series) {
        if (!s.is_object() || !s.contains("name") || !s["name"].is_string())
            throw TableFormatError("table: every series needs a string 'name'");
        Series out{s["name"].get<std::string>(), {}};
        const auto points = s.find("points");
        if (points == s.end() || !points->is_array())
            throw TableFormatError("series " + out.name + ": 'points' must be an array");
        for (const auto& p : *points) {
            if (!p.is_object() || !p.contains("category") || !p.contains("value") || !p["value"].is_number())
                throw TableFormatError("series " + out.name + ": points need 'category' and numeric 'value'");
            const auto& cat = p["category"];
            std::string category = cat.is_string() ? cat.get<std::string>() : cat.dump();
            out.points.push_back({std::move(category), p["value"].get<double>()});
        }
        table.series.push_back(std::move(out));
    }
    validate_chart_table(table);
    return table;
}

nlohmann::json chart_table_to_json(const ChartTable& table)
{
    auto series = nlohmann::json::array();
    for (const auto& s : table.series) {
        auto points = nlohmann::json::array();
        for (const auto& p : s.points)
            points.push_back({{"category", p.category}, {"value", p.value}});
        series.push_back({{"name", s.name}, {"points", std::move(points)}});
    }
    return {{"title", table.title}, {"x_label", table.x_label}, {"y_label", table.y_label}, {"series", series}};
}

ChartTable load_chart_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw TableFormatError("cannot open chart table " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw TableFormatError(path.string() + ": " + e.what());
    }
    return chart_table_from_json(doc);
}

} // namespace solvechart::agents
