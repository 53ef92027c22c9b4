// SPDX-License-Identifier: Apache-2.0

#include <solvechart/align/align.hpp>

#include <algorithm>
#include <cmath>

namespace solvechart::align {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw AlignError(AlignErrorKind::ShapeMismatch, what);
}

void check_layer(const AttentionLayerParams& layer, std::size_t d)
{
    require(layer.w_q.cols() == d && layer.w_k.cols() == d, "attention projections must take width " + std::to_string(d));
    require(layer.w_q.rows() == layer.w_k.rows() && layer.d_k() > 0, "query and key projections must agree on d_k");
    require(layer.w_v.rows() == d && layer.w_v.cols() == d, "value projection must be d x d");
    require(layer.ff_w1.cols() == d && layer.ff_b1.size() == layer.ff_w1.rows(), "feed-forward input layer shape");
    require(layer.ff_w2.rows() == d && layer.ff_w2.cols() == layer.ff_w1.rows() && layer.ff_b2.size() == d,
            "feed-forward output layer shape");
}

Matrix project(const Matrix& x, const Matrix& w) { return multiply(x, transpose(w)); }

Matrix add(const Matrix& a, const Matrix& b)
{
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) += b(i, j);
    }
    return out;
}

Matrix feed_forward(const Matrix& h, const AttentionLayerParams& layer)
{
    Matrix hidden = project(h, layer.ff_w1);
    for (std::size_t i = 0; i < hidden.rows(); ++i) {
        for (std::size_t j = 0; j < hidden.cols(); ++j)
            hidden(i, j) = std::max(0.0, hidden(i, j) + layer.ff_b1[j]);
    }
    Matrix out = project(hidden, layer.ff_w2);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j)
            out(i, j) += layer.ff_b2[j];
    }
    return out;
}

} // namespace

Matrix restricted_attention(const Matrix& x, const ClusterSet& clusters, const AttentionLayerParams& layer)
{
    const std::size_t n = x.rows();
    check_layer(layer, x.cols());
    require(clusters.labels.size() == n, "cluster labels do not cover the sequence");

    std::vector<std::vector<std::size_t>> members(clusters.k);
    for (std::size_t i = 0; i < n; ++i) {
        require(clusters.labels[i] < clusters.k, "cluster label out of range");
        members[clusters.labels[i]].push_back(i);
    }

    const Matrix q = project(x, layer.w_q);
    const Matrix k = project(x, layer.w_k);
    const Matrix v = project(x, layer.w_v);
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.d_k()));

    Matrix out(n, x.cols());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& scope = members[clusters.labels[i]];
        Vector logits(scope.size());
        for (std::size_t s = 0; s < scope.size(); ++s)
            logits[s] = dot(q.row(i), k.row(scope[s])) * scale;
        const Vector weights = softmax(logits);
        auto dst = out.row(i);
        for (std::size_t s = 0; s < scope.size(); ++s) {
            const auto src = v.row(scope[s]);
            for (std::size_t c = 0; c < dst.size(); ++c)
                dst[c] += weights[s] * src[c];
        }
    }
    return out;
}

Matrix intra_cluster_reason(const PatchGrid& grid, const ClusterSet& clusters,
                            const std::vector<AttentionLayerParams>& layers, std::size_t depth,
                            double layer_norm_epsilon)
{
    grid.check();
    if (depth == 0)
        throw AlignError(AlignErrorKind::InvalidArgument, "layer count must be at least 1");
    require(depth <= layers.size(), "requested " + std::to_string(depth) + " layers but parameters exist for "
                                        + std::to_string(layers.size()));

    Matrix x = grid.embeddings;
    for (std::size_t l = 0; l < depth; ++l) {
        const Matrix h = layer_norm(add(x, restricted_attention(x, clusters, layers[l])), layer_norm_epsilon);
        x = layer_norm(add(h, feed_forward(h, layers[l])), layer_norm_epsilon);
    }
    return x;
}

} // namespace solvechart::align
