// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <solvechart/align/matrix.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace solvechart::align {

enum class AlignErrorKind { DegenerateInput, ShapeMismatch, InvalidArgument };

class AlignError : public std::runtime_error {
public:
    AlignError(AlignErrorKind kind, const std::string& message)
        : std::runtime_error(message)
        , kind_(kind)
    {
    }
    AlignErrorKind kind() const noexcept { return kind_; }

private:
    AlignErrorKind kind_;
};

struct PatchPosition {
    int row = 0;
    int col = 0;
    bool operator==(const PatchPosition&) const = default;
};

/// n = rows * cols patch embeddings of width `dim`. Positions default to
/// row-major order; they are stored explicitly so a permuted grid keeps each
/// patch's coordinates.
struct PatchGrid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Matrix embeddings; // n x dim
    std::vector<PatchPosition> positions;

    static PatchGrid make(std::size_t rows, std::size_t cols, Matrix embeddings);

    std::size_t size() const noexcept { return embeddings.rows(); }
    std::size_t dim() const noexcept { return embeddings.cols(); }
    /// Throws on shape errors or non-finite embeddings.
    void check() const;
};

struct QueryEmbedding {
    Vector global;              // question-global representation
    std::vector<Vector> tokens; // per-token states; carried, not consumed
};

/// Patch-to-cluster assignment; ids are 0..k-1 in order of first appearance.
struct ClusterSet {
    std::vector<std::size_t> labels;
    std::size_t k = 0;
    bool operator==(const ClusterSet&) const = default;
};

struct ClusteringConfig {
    double linkage_threshold = 0.35;
    std::size_t k_max = 12;
};

/// Crosshair (same row/col), proximity (within radius), similarity
/// (row-softmax of cosine). Zero diagonal in all three.
struct PrincipleMatrices {
    Matrix crosshair;
    Matrix proximity;
    Matrix similarity;
};

struct MlpParams {
    Matrix w1; // hidden x d
    Vector b1;
    Matrix w2; // 3 x hidden
    Vector b2;
};

struct AttentionLayerParams {
    Matrix w_q; // d_k x d
    Matrix w_k; // d_k x d
    Matrix w_v; // d x d
    Matrix ff_w1; // ff x d
    Vector ff_b1;
    Matrix ff_w2; // d x ff
    Vector ff_b2;
    std::size_t d_k() const noexcept { return w_q.rows(); }
};

struct FuseParams {
    Vector gamma;
    Vector beta;
    double epsilon = 1e-5;
};

struct AlignParams {
    MlpParams mlp;
    std::vector<AttentionLayerParams> attention;
    FuseParams fuse;
    std::size_t top_k = 5;
    double annotate_boost = 1.0;
    /// Propagation threshold as a fraction of max(V).
    double propagation_fraction = 0.5;
    double layer_norm_epsilon = 1e-5;
};

struct PipelineConfig {
    ClusteringConfig clustering;
    double proximity_radius = 3.0;
    std::size_t layers = 2;
    bool vp_alignment_off = false; // V := seeded Gaussian noise
    bool intra_off = false;        // Cr := raw embeddings
    bool cross_off = false;        // Vr := V
    std::uint64_t noise_seed = 0;
};

struct Annotation {
    Matrix vr;
    Vector scores;                    // softmax over patches
    std::vector<std::size_t> marked;  // seeds plus propagated, ascending
    std::vector<std::size_t> seeds;
};

struct FuseResult {
    Matrix normalized; // before gamma/beta
    Matrix oc;
};

struct AlignmentBundle {
    ClusterSet clusters;
    PrincipleMatrices principles;
    Vector wc;  // principle weights, length 3
    Matrix wk;  // k x k cluster interaction
    Matrix v;   // n x n composed alignment
    Matrix vr;  // n x n annotated alignment
    Matrix cr;  // n x d
    Matrix normalized;
    Matrix oc;  // n x d
    std::vector<std::size_t> marked;
};

// Individual stages, in pipeline order.
ClusterSet cluster_patches(const PatchGrid& grid, const ClusteringConfig& config = {});
PrincipleMatrices build_principle_matrices(const PatchGrid& grid, double proximity_radius = 3.0);
Vector principle_weights(const PatchGrid& grid, const MlpParams& mlp);
Matrix cluster_centroids(const PatchGrid& grid, const ClusterSet& clusters);
Matrix cluster_interaction(const PatchGrid& grid, const ClusterSet& clusters);
Matrix compose_alignment(const Vector& wc, const Matrix& wk, const PrincipleMatrices& principles,
                         const ClusterSet& clusters);
/// One layer's attention, keys/values restricted to the query patch's cluster;
/// no residual, FFN or normalization.
Matrix restricted_attention(const Matrix& x, const ClusterSet& clusters, const AttentionLayerParams& layer);
Matrix intra_cluster_reason(const PatchGrid& grid, const ClusterSet& clusters,
                            const std::vector<AttentionLayerParams>& layers, std::size_t depth,
                            double layer_norm_epsilon = 1e-5);
Annotation cross_cluster_annotate(const Matrix& cr, const QueryEmbedding& query, const Matrix& v,
                                  const AlignParams& params);
FuseResult fuse(const Matrix& cr, const Matrix& vr, const FuseParams& params);

AlignmentBundle run_alignment_pipeline(const PatchGrid& grid, const QueryEmbedding& query, const AlignParams& params,
                                       const PipelineConfig& config = {});

/// Row-wise (x - mean) / sqrt(var + eps), population variance.
Matrix layer_norm(const Matrix& x, double epsilon);

// ---- synthetic instances --------------------------------------------------

struct SyntheticInstance {
    PatchGrid grid;
    QueryEmbedding query;
    AlignParams params;
};

/// Seeded random parameters for embedding width `dim`.
AlignParams random_params(std::size_t dim, std::size_t layers, std::uint64_t seed);

/// Patches drawn around a few prototype vectors so clustering has structure.
SyntheticInstance synthetic_instance(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed,
                                     std::size_t layers = 2);

Matrix gaussian_noise(std::size_t rows, std::size_t cols, std::uint64_t seed);

// ---- invariant checks -----------------------------------------------------

enum class CheckCategory { Shape, Property };

struct InvariantCheck {
    std::string name;
    CheckCategory category;
    bool passed;
    std::string detail;
};

struct InvariantTolerances {
    double simplex = 1e-6;
    double ln_mean = 1e-6;
    double ln_variance = 1e-4;
};

std::vector<InvariantCheck> check_invariants(const AlignmentBundle& bundle, const PatchGrid& grid,
                                             const AlignParams& params, const InvariantTolerances& tol = {});
bool all_passed(const std::vector<InvariantCheck>& checks, std::optional<CheckCategory> only = std::nullopt);

nlohmann::json bundle_to_json(const AlignmentBundle& bundle);
nlohmann::json checks_to_json(const std::vector<InvariantCheck>& checks);

} // namespace solvechart::align
