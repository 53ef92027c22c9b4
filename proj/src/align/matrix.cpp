// SPDX-License-Identifier: Apache-2.0

#include <solvechart/align/align.hpp>

#include <algorithm>
#include <cmath>

namespace solvechart::align {

Matrix multiply(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw AlignError(AlignErrorKind::ShapeMismatch, "matrix product with incompatible shapes");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Matrix transpose(const Matrix& a)
{
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(j, i) = a(i, j);
    }
    return out;
}

Vector apply(const Matrix& a, std::span<const double> x)
{
    if (a.cols() != x.size())
        throw AlignError(AlignErrorKind::ShapeMismatch, "matrix-vector product with incompatible shapes");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        y[i] = dot(a.row(i), x);
    return y;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vector softmax(std::span<const double> logits)
{
    if (logits.empty())
        return {};
    const double m = *std::max_element(logits.begin(), logits.end());
    Vector out(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        total += out[i];
    }
    for (double& x : out)
        x /= total;
    return out;
}

nlohmann::json to_json(const Matrix& m)
{
    auto out = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        out.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return out;
}

nlohmann::json to_json(const Vector& v) { return nlohmann::json(v); }

Matrix layer_norm(const Matrix& x, double epsilon)
{
    Matrix out(x.rows(), x.cols());
    const double d = static_cast<double>(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto r = x.row(i);
        double mean = 0.0;
        for (double v : r)
            mean += v;
        mean /= d;
        double var = 0.0;
        for (double v : r)
            var += (v - mean) * (v - mean);
        var /= d;
        const double inv = 1.0 / std::sqrt(var + epsilon);
        for (std::size_t j = 0; j < x.cols(); ++j)
            out(i, j) = (r[j] - mean) * inv;
    }
    return out;
}

} // namespace solvechart::align
