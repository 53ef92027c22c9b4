// SPDX-License-Identifier: Apache-2.0

#include <solvechart/align/align.hpp>

#include <algorithm>
#include <numeric>

namespace solvechart::align {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw AlignError(AlignErrorKind::ShapeMismatch, what);
}

} // namespace

Annotation cross_cluster_annotate(const Matrix& cr, const QueryEmbedding& query, const Matrix& v,
                                  const AlignParams& params)
{
    const std::size_t n = cr.rows();
    require(query.global.size() == cr.cols(), "query width does not match the reasoned sequence");
    require(v.rows() == n && v.cols() == n, "alignment matrix must be n x n");
    require(params.top_k >= 1 && params.top_k <= n, "top_k must lie in [1, n]");
    if (params.annotate_boost < 0.0)
        throw AlignError(AlignErrorKind::InvalidArgument, "annotation boost must be non-negative");

    Annotation out;
    out.scores = softmax(align::apply(cr, query.global));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.scores[a] > out.scores[b]; });
    out.seeds.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(params.top_k));
    std::sort(out.seeds.begin(), out.seeds.end());

    // One hop: anything a seed aligns to above the threshold is marked too.
    const double threshold = params.propagation_fraction * *std::max_element(v.values().begin(), v.values().end());
    std::vector<bool> marked(n, false);
    for (std::size_t i : out.seeds) {
        marked[i] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (v(i, j) > threshold)
                marked[j] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (marked[i])
            out.marked.push_back(i);
    }

    out.vr = v;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (marked[i] || marked[j])
                out.vr(i, j) += params.annotate_boost;
        }
    }
    return out;
}

FuseResult fuse(const Matrix& cr, const Matrix& vr, const FuseParams& params)
{
    const std::size_t n = cr.rows();
    const std::size_t d = cr.cols();
    require(vr.rows() == n && vr.cols() == n, "annotated alignment must be n x n");
    require(params.gamma.size() == d && params.beta.size() == d, "gamma and beta must have length d");
    if (!(params.epsilon > 0.0))
        throw AlignError(AlignErrorKind::InvalidArgument, "epsilon must be positive");

    // Residual over the aligned context Vr * Cr, then row layer norm.
    Matrix z = multiply(vr, cr);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            z(i, j) += cr(i, j);
    }
    FuseResult out;
    out.normalized = layer_norm(z, params.epsilon);
    out.oc = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            out.oc(i, j) = params.gamma[j] * out.normalized(i, j) + params.beta[j];
    }
    return out;
}

} // namespace solvechart::align
