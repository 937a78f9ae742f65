#pragma once

// Brute-force references shared by the unit and acceptance suites. They use
// nothing from the library beyond the Matrix container.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "disco/lowrank.hpp"
#include "disco/matrix.hpp"

namespace disco::testing {

inline Matrix randomMatrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                           double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = u(rng);
    return m;
}

inline LowRankAdapter randomAdapter(std::size_t d, std::size_t k, std::size_t r,
                                    std::mt19937_64& rng, double scale = 1.0) {
    return LowRankAdapter(randomMatrix(d, r, rng, scale), randomMatrix(r, k, rng, scale));
}

/// Textbook triple-loop product with entry-by-entry indexing.
inline Matrix referenceProduct(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
            out(i, j) = s;
        }
    return out;
}

/// sum_i alpha_i * B_i * A_i.
inline Matrix referenceWeightedSum(const std::vector<LowRankAdapter>& adapters,
                                   const std::vector<double>& alpha) {
    Matrix out(adapters.front().B.rows(), adapters.front().A.cols());
    for (std::size_t t = 0; t < adapters.size(); ++t) {
        const Matrix p = referenceProduct(adapters[t].B, adapters[t].A);
        for (std::size_t i = 0; i < out.rows(); ++i)
            for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += alpha[t] * p(i, j);
    }
    return out;
}

inline double referenceCosine(const std::vector<double>& u, const std::vector<double>& v) {
    double uv = 0, uu = 0, vv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uv += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    return uv / std::sqrt(uu * vv);
}

/// (n0 * z + sum n_j mu_j) / (n0 + sum n_j), long-double accumulation.
inline std::vector<double> referenceWeightedMean(const std::vector<std::vector<double>>& vectors,
                                                 const std::vector<double>& weights) {
    std::vector<long double> acc(vectors.front().size(), 0.0L);
    long double total = 0.0L;
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += static_cast<long double>(weights[j]) * vectors[j][i];
        total += weights[j];
    }
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<double>(acc[i] / total);
    return out;
}

}  // namespace disco::testing
