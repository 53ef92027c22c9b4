// SPDX-License-Identifier: Apache-2.0

#include <solvechart/align/align.hpp>

#include <cmath>
#include <sstream>

namespace solvechart::align {

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

class Collector {
public:
    void shape(const std::string& name, bool ok, const std::string& detail = {})
    {
        out.push_back({name, CheckCategory::Shape, ok, detail});
    }
    void property(const std::string& name, bool ok, const std::string& detail = {})
    {
        out.push_back({name, CheckCategory::Property, ok, detail});
    }
    std::vector<InvariantCheck> out;
};

bool has_shape(const Matrix& m, std::size_t r, std::size_t c) { return m.rows() == r && m.cols() == c; }

} // namespace

std::vector<InvariantCheck> check_invariants(const AlignmentBundle& b, const PatchGrid& grid, const AlignParams& params,
                                             const InvariantTolerances& tol)
{
    const std::size_t n = grid.size();
    const std::size_t d = grid.dim();
    const std::size_t k = b.clusters.k;
    Collector c;

    c.shape("labels cover n patches", b.clusters.labels.size() == n);
    c.shape("Wc has length 3", b.wc.size() == 3);
    c.shape("Wk is k x k", has_shape(b.wk, k, k), shape(b.wk));
    c.shape("V is n x n", has_shape(b.v, n, n), shape(b.v));
    c.shape("Vr is n x n", has_shape(b.vr, n, n), shape(b.vr));
    c.shape("Cr is n x d", has_shape(b.cr, n, d), shape(b.cr));
    c.shape("Oc is n x d", has_shape(b.oc, n, d), shape(b.oc));
    c.shape("principle matrices are n x n", has_shape(b.principles.crosshair, n, n)
                                                && has_shape(b.principles.proximity, n, n)
                                                && has_shape(b.principles.similarity, n, n));
    if (!all_passed(c.out, CheckCategory::Shape))
        return c.out;

    {
        std::vector<std::size_t> counts(k, 0);
        bool in_range = k >= 1;
        for (std::size_t l : b.clusters.labels) {
            if (l < k)
                ++counts[l];
            else
                in_range = false;
        }
        bool non_empty = true;
        for (std::size_t cnt : counts)
            non_empty = non_empty && cnt > 0;
        c.property("partition: disjoint, covering, non-empty clusters", in_range && non_empty,
                   "k=" + std::to_string(k));
    }

    {
        double sum = 0.0;
        bool non_negative = true;
        for (double w : b.wc) {
            sum += w;
            non_negative = non_negative && w >= 0.0;
        }
        c.property("Wc on the simplex", non_negative && std::fabs(sum - 1.0) <= tol.simplex,
                   "sum=" + std::to_string(sum));
    }

    {
        double worst = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                s += b.wk(i, j);
            worst = std::max(worst, std::fabs(s - 1.0));
        }
        c.property("Wk rows sum to 1", worst <= tol.simplex, "max deviation " + std::to_string(worst));
    }

    {
        bool symmetric_binary = true;
        double worst_row = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                for (const Matrix* m : {&b.principles.crosshair, &b.principles.proximity}) {
                    const double x = (*m)(i, j);
                    symmetric_binary = symmetric_binary && (x == 0.0 || x == 1.0) && x == (*m)(j, i);
                }
                s += b.principles.similarity(i, j);
            }
            symmetric_binary = symmetric_binary && b.principles.crosshair(i, i) == 0.0
                && b.principles.proximity(i, i) == 0.0 && b.principles.similarity(i, i) == 0.0;
            if (n > 1)
                worst_row = std::max(worst_row, std::fabs(s - 1.0));
        }
        c.property("I and P symmetric binary with zero diagonal", symmetric_binary);
        c.property("S rows sum to 1 off the diagonal", worst_row <= tol.simplex,
                   "max deviation " + std::to_string(worst_row));
    }

    {
        std::size_t violations = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (b.clusters.labels[i] == b.clusters.labels[j] && b.v(i, j) != 0.0)
                    ++violations;
            }
        }
        c.property("V is zero within clusters", violations == 0, std::to_string(violations) + " non-zero entries");
    }

    {
        std::size_t neg_v = 0, neg_vr = 0, below = 0, unmarked_changed = 0;
        std::vector<bool> marked(n, false);
        for (std::size_t m : b.marked) {
            if (m < n)
                marked[m] = true;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                neg_v += b.v(i, j) < 0.0;
                neg_vr += b.vr(i, j) < 0.0;
                below += b.vr(i, j) < b.v(i, j);
                if (!marked[i] && !marked[j] && b.vr(i, j) != b.v(i, j))
                    ++unmarked_changed;
            }
        }
        c.property("V non-negative", neg_v == 0, std::to_string(neg_v) + " negative entries");
        c.property("Vr non-negative", neg_vr == 0, std::to_string(neg_vr) + " negative entries");
        c.property("Vr >= V entrywise", below == 0, std::to_string(below) + " entries below V");
        c.property("Vr equals V outside marked rows and columns", unmarked_changed == 0,
                   std::to_string(unmarked_changed) + " entries changed");
    }

    {
        double worst_mean = 0.0, worst_var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = b.normalized.row(i);
            double mean = 0.0;
            for (double x : r)
                mean += x;
            mean /= static_cast<double>(d);
            double var = 0.0;
            for (double x : r)
                var += (x - mean) * (x - mean);
            var /= static_cast<double>(d);
            worst_mean = std::max(worst_mean, std::fabs(mean));
            worst_var = std::max(worst_var, std::fabs(var - 1.0));
        }
        std::ostringstream detail;
        detail << "max |mean|=" << worst_mean << ", max |var-1|=" << worst_var;
        // A single-column row has zero variance by construction.
        const bool var_ok = d == 1 || worst_var <= tol.ln_variance;
        c.property("fused rows normalized (mean 0, variance 1)", worst_mean <= tol.ln_mean && var_ok, detail.str());
    }

    {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double expect = params.fuse.gamma[j] * b.normalized(i, j) + params.fuse.beta[j];
                worst = std::max(worst, std::fabs(expect - b.oc(i, j)));
            }
        }
        c.property("Oc is the affine map of the normalized rows", worst <= 1e-12);
    }
    return c.out;
}

bool all_passed(const std::vector<InvariantCheck>& checks, std::optional<CheckCategory> only)
{
    for (const auto& c : checks) {
        if ((!only || c.category == *only) && !c.passed)
            return false;
    }
    return true;
}

nlohmann::json bundle_to_json(const AlignmentBundle& b)
{
    return {
        {"k", b.clusters.k},
        {"labels", b.clusters.labels},
        {"Wc", to_json(b.wc)},
        {"W", to_json(b.wk)},
        {"I", to_json(b.principles.crosshair)},
        {"P", to_json(b.principles.proximity)},
        {"S", to_json(b.principles.similarity)},
        {"V", to_json(b.v)},
        {"Vr", to_json(b.vr)},
        {"Cr", to_json(b.cr)},
        {"Oc", to_json(b.oc)},
        {"marked", b.marked},
    };
}

nlohmann::json checks_to_json(const std::vector<InvariantCheck>& checks)
{
    auto out = nlohmann::json::array();
    for (const auto& c : checks) {
        out.push_back({{"name", c.name},
                       {"category", c.category == CheckCategory::Shape ? "shape" : "property"},
                       {"passed", c.passed},
                       {"detail", c.detail}});
    }
    return out;
}

} // namespace solvechart::align
