// SPDX-License-Identifier: Apache-2.0
// Reference computations for the alignment core, written with plain loops.

#pragma once

#include <solvechart/align/align.hpp>

#include <vector>

namespace solvechart::testing {

using Dense = std::vector<std::vector<double>>;

Dense to_dense(const align::Matrix& m);

/// Full n x n attention with an additive -inf mask on pairs from different clusters.
Dense masked_dense_attention(const Dense& x, const std::vector<std::size_t>& labels,
                             const align::AttentionLayerParams& layer);

/// Z = Cr + Vr Cr, row layer norm, then gamma * . + beta.
Dense reference_fuse(const Dense& cr, const Dense& vr, const std::vector<double>& gamma,
                     const std::vector<double>& beta, double eps);

double max_abs_diff(const Dense& a, const Dense& b);

/// Average-linkage cosine clustering by exhaustive recomputation of every
/// cluster-pair distance at every step. Same stop and tie rules as the library.
std::vector<std::size_t> brute_force_clusters(const Dense& x, double threshold, std::size_t k_max);

} // namespace solvechart::testing

namespace solvechart::testing {

/// Runs the pipeline on `inst` and on a copy whose patches are reordered by
/// `perm` (new index i holds old patch perm[i], coordinates kept). Returns the
/// largest entry-wise gap between the permuted outputs (V, Vr, Cr, Oc).
double permutation_gap(const align::SyntheticInstance& inst, const std::vector<std::size_t>& perm);

} // namespace solvechart::testing
