// SPDX-License-Identifier: Apache-2.0

#include <solvechart/agents/backends.hpp>
#include <solvechart/agents/templates.hpp>
#include <solvechart/engine/value.hpp>

namespace solvechart::agents {

namespace {

[[noreturn]] void unanswerable(const std::string& why) { throw AgentError(AgentErrorKind::Unanswerable, why); }

bool better(double candidate, double incumbent, Extreme e)
{
    return e == Extreme::Highest ? candidate > incumbent : candidate < incumbent;
}

class TableView {
public:
    explicit TableView(const ChartTable& table) : table_(table)
    {
        for (const auto& s : table.series)
            series_names_.push_back(s.name);
    }

    const Series& series(const std::string& phrase) const
    {
        const auto idx = longest_vocabulary_match(phrase, series_names_);
        if (!idx)
            unanswerable("no series named in '" + phrase + "'");
        return table_.series[*idx];
    }

    static const DataPoint& point(const Series& s, const std::string& phrase)
    {
        std::vector<std::string> categories;
        for (const auto& p : s.points)
            categories.push_back(p.category);
        const auto idx = longest_vocabulary_match(phrase, categories);
        if (!idx)
            unanswerable("no category of " + s.name + " named in '" + phrase + "'");
        return s.points[*idx];
    }

    double cell(const std::string& series_phrase, const std::string& category_phrase) const
    {
        return point(series(series_phrase), category_phrase).value;
    }

    static double extreme_of(const Series& s, Extreme e)
    {
        if (s.points.empty())
            unanswerable("series " + s.name + " has no points");
        double best = s.points.front().value;
        for (const auto& p : s.points) {
            if (better(p.value, best, e))
                best = p.value;
        }
        return best;
    }

    const ChartTable& table() const { return table_; }

private:
    const ChartTable& table_;
    std::vector<std::string> series_names_;
};

std::string number_text(double v) { return engine::stringify(engine::Value::number(v)); }

std::string answer_for(const TableView& view, const TemplateMatch& t)
{
    const ChartTable& table = view.table();
    switch (t.kind) {
    case TemplateKind::ValueOf:
        return number_text(view.cell(t.series, t.category));
    case TemplateKind::ValueOfCategory:
        if (table.series.size() != 1)
            unanswerable("question names no series and the chart has " + std::to_string(table.series.size()));
        return number_text(TableView::point(table.series.front(), t.category).value);
    case TemplateKind::ExtremeOfSeries:
        return number_text(TableView::extreme_of(view.series(t.series), t.extreme));
    case TemplateKind::ArgExtremeSeries: {
        const Series* best = nullptr;
        double best_value = 0.0;
        for (const auto& s : table.series) {
            if (s.points.empty())
                continue;
            const double v = TableView::extreme_of(s, t.extreme);
            if (!best || better(v, best_value, t.extreme)) {
                best = &s;
                best_value = v;
            }
        }
        if (!best)
            unanswerable("chart has no data");
        return best->name;
    }
    case TemplateKind::ArgExtremeCategory: {
        const DataPoint* best = nullptr;
        for (const auto& s : table.series) {
            for (const auto& p : s.points) {
                if (!best || better(p.value, best->value, t.extreme))
                    best = &p;
            }
        }
        if (!best)
            unanswerable("chart has no data");
        return best->category;
    }
    case TemplateKind::SumOfCells:
    case TemplateKind::DifferenceOfCells: {
        // A cell without a category borrows the other cell's ("A and B in 2012").
        const std::string& c1 = t.category.empty() ? t.second_category : t.category;
        const std::string& c2 = t.second_category.empty() ? t.category : t.second_category;
        const double a = view.cell(t.series, c1);
        const double b = view.cell(t.second_series, c2);
        return number_text(t.kind == TemplateKind::SumOfCells ? a + b : a - b);
    }
    }
    unanswerable("unsupported template");
}

} // namespace

AgentAnswer oracle_answer(const ChartTable& table, const AgentQuery& query)
{
    const auto match = match_template(query.question);
    if (!match)
        unanswerable("no template matches '" + query.question + "'");
    return AgentAnswer{answer_for(TableView(table), *match), 0.0, "oracle"};
}

void OracleAgent::add_table(std::string chart_id, ChartTable table)
{
    tables_.insert_or_assign(std::move(chart_id), std::move(table));
}

AgentAnswer OracleAgent::answer(const AgentQuery& query)
{
    if (const auto it = tables_.find(query.chart_id); it != tables_.end())
        return oracle_answer(it->second, query);
    if (default_table_)
        return oracle_answer(*default_table_, query);
    unanswerable("no table registered for chart '" + query.chart_id + "'");
}

std::string_view operator_name(Operator op) { return op == Operator::Ask ? "ASK" : "SUBSTEP"; }

std::optional<Operator> operator_from_name(std::string_view name)
{
    if (name == "ASK")
        return Operator::Ask;
    if (name == "SUBSTEP")
        return Operator::Substep;
    return std::nullopt;
}

std::string_view agent_error_kind_name(AgentErrorKind kind)
{
    switch (kind) {
    case AgentErrorKind::Unanswerable: return "Unanswerable";
    case AgentErrorKind::Transport: return "Transport";
    case AgentErrorKind::Timeout: return "Timeout";
    case AgentErrorKind::BadResponse: return "BadResponse";
    case AgentErrorKind::CassetteMiss: return "CassetteMiss";
    }
    return "?";
}

} // namespace solvechart::agents
