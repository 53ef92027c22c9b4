// SPDX-License-Identifier: Apache-2.0

#include <solvechart/align/align.hpp>

#include <cmath>

namespace solvechart::align {

PatchGrid PatchGrid::make(std::size_t rows, std::size_t cols, Matrix embeddings)
{
    PatchGrid grid{rows, cols, std::move(embeddings), {}};
    grid.positions.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c)
            grid.positions.push_back({static_cast<int>(r), static_cast<int>(c)});
    }
    grid.check();
    return grid;
}

void PatchGrid::check() const
{
    if (rows == 0 || cols == 0 || embeddings.rows() != rows * cols)
        throw AlignError(AlignErrorKind::ShapeMismatch, "grid " + std::to_string(rows) + "x" + std::to_string(cols)
                                                            + " does not match " + std::to_string(embeddings.rows())
                                                            + " embeddings");
    if (embeddings.cols() == 0)
        throw AlignError(AlignErrorKind::ShapeMismatch, "embedding width must be positive");
    if (positions.size() != embeddings.rows())
        throw AlignError(AlignErrorKind::ShapeMismatch, "every patch needs a position");
    for (double x : embeddings.values()) {
        if (!std::isfinite(x))
            throw AlignError(AlignErrorKind::DegenerateInput, "non-finite embedding value");
    }
}

AlignmentBundle run_alignment_pipeline(const PatchGrid& grid, const QueryEmbedding& query, const AlignParams& params,
                                       const PipelineConfig& config)
{
    grid.check();
    if (query.global.size() != grid.dim())
        throw AlignError(AlignErrorKind::ShapeMismatch, "query width does not match embeddings");
    for (double x : query.global) {
        if (!std::isfinite(x))
            throw AlignError(AlignErrorKind::DegenerateInput, "non-finite query value");
    }

    AlignmentBundle b;
    b.clusters = cluster_patches(grid, config.clustering);
    b.principles = build_principle_matrices(grid, config.proximity_radius);
    b.wc = principle_weights(grid, params.mlp);
    b.wk = cluster_interaction(grid, b.clusters);
    if (config.vp_alignment_off)
        b.v = gaussian_noise(grid.size(), grid.size(), config.noise_seed);
    else
        b.v = compose_alignment(b.wc, b.wk, b.principles, b.clusters);

    if (config.intra_off)
        b.cr = grid.embeddings;
    else
        b.cr = intra_cluster_reason(grid, b.clusters, params.attention, config.layers, params.layer_norm_epsilon);

    if (config.cross_off) {
        b.vr = b.v;
    } else {
        Annotation a = cross_cluster_annotate(b.cr, query, b.v, params);
        b.vr = std::move(a.vr);
        b.marked = std::move(a.marked);
    }

    FuseResult fused = fuse(b.cr, b.vr, params.fuse);
    b.normalized = std::move(fused.normalized);
    b.oc = std::move(fused.oc);
    return b;
}

} // namespace solvechart::align
