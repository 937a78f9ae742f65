#include "disco/lowrank.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

LowRankAdapter::LowRankAdapter(Matrix b, Matrix a) : B(std::move(b)), A(std::move(a)) {
    if (B.cols() != A.rows()) {
        throw ShapeError(fmt::format("adapter: B has {} columns but A has {} rows", B.cols(),
                                     A.rows()));
    }
    const std::size_t r = B.cols();
    if (r < 1 || r > std::min(B.rows(), A.cols())) {
        throw ShapeError(fmt::format("adapter rank {} outside [1, min({}, {})]", r, B.rows(),
                                     A.cols()));
    }
    if (!B.allFinite() || !A.allFinite()) throw NumericError("adapter has non-finite entries");
}

LowRankAdapter LowRankAdapter::zeros(std::size_t d, std::size_t k, std::size_t rank) {
    return LowRankAdapter(Matrix(d, rank), Matrix(rank, k));
}

void requireSameShape(const LowRankAdapter& a, const LowRankAdapter& b, const char* what) {
    requireSameShape(a.B, b.B, what);
    requireSameShape(a.A, b.A, what);
}

double cosine(std::span<const double> u, std::span<const double> v) {
    const double nu = norm2(u);
    const double nv = norm2(v);
    if (!(nu > 0.0) || !(nv > 0.0)) throw DegenerateInputError("cosine of a zero-norm vector");
    const double c = dot(u, v) / (nu * nv);
    return std::clamp(c, -1.0, 1.0);
}

Matrix adapterProduct(const LowRankAdapter& adapter) { return matmul(adapter.B, adapter.A); }

StackedAdapter concatAdapters(std::span<const LowRankAdapter> adapters) {
    if (adapters.empty()) throw ShapeError("concatAdapters: empty adapter list");
    const std::size_t d = adapters.front().outDim();
    const std::size_t k = adapters.front().inDim();
    std::size_t total = 0;
    for (const auto& a : adapters) {
        if (a.outDim() != d || a.inDim() != k) {
            throw ShapeError(fmt::format("concatAdapters: adapter {}x{} does not match {}x{}",
                                         a.outDim(), a.inDim(), d, k));
        }
        total += a.rank();
    }

    StackedAdapter out{Matrix(d, total), Matrix(total, k), {}};
    out.blockRanks.reserve(adapters.size());
    std::size_t offset = 0;
    for (const auto& a : adapters) {
        const std::size_t r = a.rank();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < r; ++j) out.B(i, offset + j) = a.B(i, j);
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t c = 0; c < k; ++c) out.A(offset + j, c) = a.A(j, c);
        out.blockRanks.push_back(r);
        offset += r;
    }
    return out;
}

Matrix stackedProduct(const StackedAdapter& stacked) { return matmul(stacked.B, stacked.A); }

}  // namespace disco
