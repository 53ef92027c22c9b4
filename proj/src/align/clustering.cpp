// SPDX-License-Identifier: Apache-2.0

#include <solvechart/align/align.hpp>

#include <limits>

namespace solvechart::align {

namespace {

// Cosine distance matrix; zero-norm patches have no defined direction.
Matrix cosine_distances(const PatchGrid& grid)
{
    const std::size_t n = grid.size();
    Vector norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        norms[i] = norm(grid.embeddings.row(i));
        if (norms[i] == 0.0)
            throw AlignError(AlignErrorKind::DegenerateInput, "patch " + std::to_string(i) + " has a zero embedding");
    }
    Matrix dist(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double cos = dot(grid.embeddings.row(i), grid.embeddings.row(j)) / (norms[i] * norms[j]);
            dist(i, j) = dist(j, i) = 1.0 - cos;
        }
    }
    return dist;
}

} // namespace

// Average linkage with Lance-Williams updates. Merging continues while more
// than k_max clusters remain, then only while the closest pair is within the
// threshold. Ties go to the lowest (i, j) pair.
ClusterSet cluster_patches(const PatchGrid& grid, const ClusteringConfig& config)
{
    grid.check();
    if (config.k_max == 0)
        throw AlignError(AlignErrorKind::InvalidArgument, "k_max must be positive");

    const std::size_t n = grid.size();
    Matrix dist = cosine_distances(grid);
    std::vector<std::size_t> owner(n);  // patch -> representative cluster slot
    std::vector<std::size_t> sizes(n, 1);
    std::vector<bool> active(n, true);
    for (std::size_t i = 0; i < n; ++i)
        owner[i] = i;

    std::size_t remaining = n;
    while (remaining > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t a = 0, b = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i])
                continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (active[j] && dist(i, j) < best) {
                    best = dist(i, j);
                    a = i;
                    b = j;
                }
            }
        }
        if (remaining <= config.k_max && best > config.linkage_threshold)
            break;

        const double sa = static_cast<double>(sizes[a]);
        const double sb = static_cast<double>(sizes[b]);
        for (std::size_t c = 0; c < n; ++c) {
            if (!active[c] || c == a || c == b)
                continue;
            const double merged = (sa * dist(a, c) + sb * dist(b, c)) / (sa + sb);
            dist(a, c) = dist(c, a) = merged;
        }
        sizes[a] += sizes[b];
        active[b] = false;
        for (auto& o : owner) {
            if (o == b)
                o = a;
        }
        --remaining;
    }

    ClusterSet out;
    out.labels.assign(n, 0);
    std::vector<std::size_t> id_of_slot(n, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < n; ++i) {
        auto& id = id_of_slot[owner[i]];
        if (id == std::numeric_limits<std::size_t>::max())
            id = out.k++;
        out.labels[i] = id;
    }
    return out;
}

} // namespace solvechart::align
