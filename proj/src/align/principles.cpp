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

} // namespace

PrincipleMatrices build_principle_matrices(const PatchGrid& grid, double proximity_radius)
{
    grid.check();
    const std::size_t n = grid.size();
    PrincipleMatrices m{Matrix(n, n), Matrix(n, n), Matrix(n, n)};

    for (std::size_t i = 0; i < n; ++i) {
        const auto pi = grid.positions[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const auto pj = grid.positions[j];
            if (pi.row == pj.row || pi.col == pj.col)
                m.crosshair(i, j) = 1.0;
            const double dr = pi.row - pj.row;
            const double dc = pi.col - pj.col;
            if (std::sqrt(dr * dr + dc * dc) <= proximity_radius)
                m.proximity(i, j) = 1.0;
        }
    }

    Vector norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        norms[i] = norm(grid.embeddings.row(i));
        if (norms[i] == 0.0)
            throw AlignError(AlignErrorKind::DegenerateInput, "patch " + std::to_string(i) + " has a zero embedding");
    }
    for (std::size_t i = 0; i < n; ++i) {
        Vector logits;
        logits.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i)
                logits.push_back(dot(grid.embeddings.row(i), grid.embeddings.row(j)) / (norms[i] * norms[j]));
        }
        const Vector probs = softmax(logits);
        for (std::size_t j = 0, slot = 0; j < n; ++j) {
            if (j != i)
                m.similarity(i, j) = probs[slot++];
        }
    }
    return m;
}

Vector principle_weights(const PatchGrid& grid, const MlpParams& mlp)
{
    grid.check();
    const std::size_t d = grid.dim();
    require(mlp.w1.cols() == d, "MLP first layer expects width " + std::to_string(mlp.w1.cols()) + ", embeddings have "
                                    + std::to_string(d));
    require(mlp.b1.size() == mlp.w1.rows(), "MLP first bias has the wrong length");
    require(mlp.w2.rows() == 3 && mlp.w2.cols() == mlp.w1.rows(), "MLP second layer must be 3 x hidden");
    require(mlp.b2.size() == 3, "MLP second bias must have length 3");

    Vector pooled(d, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto r = grid.embeddings.row(i);
        for (std::size_t c = 0; c < d; ++c)
            pooled[c] += r[c];
    }
    for (double& x : pooled)
        x /= static_cast<double>(grid.size());

    Vector hidden = align::apply(mlp.w1, pooled);
    for (std::size_t h = 0; h < hidden.size(); ++h)
        hidden[h] = std::max(0.0, hidden[h] + mlp.b1[h]);
    Vector logits = align::apply(mlp.w2, hidden);
    for (std::size_t c = 0; c < 3; ++c)
        logits[c] += mlp.b2[c];
    return softmax(logits);
}

Matrix cluster_centroids(const PatchGrid& grid, const ClusterSet& clusters)
{
    require(clusters.labels.size() == grid.size(), "cluster labels do not cover the grid");
    Matrix g(clusters.k, grid.dim());
    std::vector<std::size_t> counts(clusters.k, 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::size_t c = clusters.labels[i];
        require(c < clusters.k, "cluster label out of range");
        ++counts[c];
        const auto r = grid.embeddings.row(i);
        for (std::size_t j = 0; j < grid.dim(); ++j)
            g(c, j) += r[j];
    }
    for (std::size_t c = 0; c < clusters.k; ++c) {
        require(counts[c] > 0, "cluster " + std::to_string(c) + " is empty");
        for (std::size_t j = 0; j < grid.dim(); ++j)
            g(c, j) /= static_cast<double>(counts[c]);
    }
    return g;
}

Matrix cluster_interaction(const PatchGrid& grid, const ClusterSet& clusters)
{
    const Matrix g = cluster_centroids(grid, clusters);
    const Matrix gram = multiply(g, transpose(g));
    Matrix w(clusters.k, clusters.k);
    for (std::size_t i = 0; i < clusters.k; ++i) {
        const Vector row = softmax(gram.row(i));
        std::copy(row.begin(), row.end(), w.row(i).begin());
    }
    return w;
}

Matrix compose_alignment(const Vector& wc, const Matrix& wk, const PrincipleMatrices& principles,
                         const ClusterSet& clusters)
{
    const std::size_t n = clusters.labels.size();
    require(wc.size() == 3, "principle weights must have length 3");
    require(wk.rows() == clusters.k && wk.cols() == clusters.k, "interaction matrix must be k x k");
    for (const Matrix* m : {&principles.crosshair, &principles.proximity, &principles.similarity})
        require(m->rows() == n && m->cols() == n, "principle matrices must be n x n");

    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t gi = clusters.labels[i];
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t gj = clusters.labels[j];
            if (gi == gj)
                continue;
            const double combined = wc[0] * principles.crosshair(i, j) + wc[1] * principles.proximity(i, j)
                + wc[2] * principles.similarity(i, j);
            v(i, j) = wk(gi, gj) * combined;
        }
    }
    return v;
}

} // namespace solvechart::align
