// SPDX-License-Identifier: Apache-2.0

#include <solvechart/align/align.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace solvechart::align {

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, double scale, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, scale);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = normal(rng);
    }
    return m;
}

Vector random_vector(std::size_t n, double mean, double scale, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(mean, scale);
    Vector v(n);
    for (double& x : v)
        x = normal(rng);
    return v;
}

} // namespace

Matrix gaussian_noise(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return random_matrix(rows, cols, 1.0, rng);
}

AlignParams random_params(std::size_t dim, std::size_t layers, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    const std::size_t hidden = dim;
    const std::size_t ff = 2 * dim;

    AlignParams p;
    p.mlp.w1 = random_matrix(hidden, dim, scale, rng);
    p.mlp.b1 = random_vector(hidden, 0.0, 0.1, rng);
    p.mlp.w2 = random_matrix(3, hidden, scale, rng);
    p.mlp.b2 = random_vector(3, 0.0, 0.1, rng);
    for (std::size_t l = 0; l < layers; ++l) {
        AttentionLayerParams layer;
        layer.w_q = random_matrix(dim, dim, scale, rng);
        layer.w_k = random_matrix(dim, dim, scale, rng);
        layer.w_v = random_matrix(dim, dim, scale, rng);
        layer.ff_w1 = random_matrix(ff, dim, scale, rng);
        layer.ff_b1 = random_vector(ff, 0.0, 0.1, rng);
        layer.ff_w2 = random_matrix(dim, ff, 1.0 / std::sqrt(static_cast<double>(ff)), rng);
        layer.ff_b2 = random_vector(dim, 0.0, 0.1, rng);
        p.attention.push_back(std::move(layer));
    }
    p.fuse.gamma = random_vector(dim, 1.0, 0.1, rng);
    p.fuse.beta = random_vector(dim, 0.0, 0.1, rng);
    return p;
}

SyntheticInstance synthetic_instance(std::size_t rows, std::size_t cols, std::size_t dim, std::uint64_t seed,
                                     std::size_t layers)
{
    std::mt19937_64 rng(seed);
    const std::size_t n = rows * cols;
    const std::size_t prototypes = std::clamp<std::size_t>(n / 3, 1, 4);

    const Matrix centers = random_matrix(prototypes, dim, 1.0, rng);
    std::uniform_int_distribution<std::size_t> pick(0, prototypes - 1);
    std::normal_distribution<double> jitter(0.0, 0.15);
    Matrix emb(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = pick(rng);
        for (std::size_t j = 0; j < dim; ++j)
            emb(i, j) = centers(c, j) + jitter(rng);
    }

    SyntheticInstance out{PatchGrid::make(rows, cols, std::move(emb)), {}, random_params(dim, layers, seed ^ 0x9e3779b97f4a7c15ULL)};
    out.query.global = random_vector(dim, 0.0, 1.0, rng);
    out.params.top_k = std::min<std::size_t>(out.params.top_k, n);
    return out;
}

} // namespace solvechart::align
