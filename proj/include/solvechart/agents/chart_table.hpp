// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace solvechart::agents {

struct DataPoint {
    std::string category;
    double value = 0.0;
    bool operator==(const DataPoint&) const = default;
};

struct Series {
    std::string name;
    std::vector<DataPoint> points;
    bool operator==(const Series&) const = default;
};

/// Ground-truth content of one chart. Series names are unique ignoring case;
/// categories are unique within a series.
struct ChartTable {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    bool operator==(const ChartTable&) const = default;
};

class TableFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ChartTable chart_table_from_json(const nlohmann::json& doc);
nlohmann::json chart_table_to_json(const ChartTable& table);
ChartTable load_chart_table(const std::filesystem::path& path);

/// Throws TableFormatError when an invariant does not hold.
void validate_chart_table(const ChartTable& table);

} // namespace solvechart::agents
