#pragma once

#include <span>
#include <vector>

#include "disco/matrix.hpp"

namespace disco {

/// A low-rank update Delta W = B * A with B (d x r) and A (r x k).
struct LowRankAdapter {
    Matrix B;
    Matrix A;

    LowRankAdapter() = default;
    /// Validates B.cols == A.rows == rank, 1 <= rank <= min(d, k) and finite entries.
    LowRankAdapter(Matrix b, Matrix a);

    /// Zero-initialized adapter of the given shape.
    static LowRankAdapter zeros(std::size_t d, std::size_t k, std::size_t rank);

    std::size_t rank() const noexcept { return B.cols(); }
    std::size_t outDim() const noexcept { return B.rows(); }
    std::size_t inDim() const noexcept { return A.cols(); }

    friend bool operator==(const LowRankAdapter&, const LowRankAdapter&) = default;
};

void requireSameShape(const LowRankAdapter& a, const LowRankAdapter& b, const char* what);

/// Cosine similarity; throws DegenerateInputError if either vector has zero norm.
double cosine(std::span<const double> u, std::span<const double> v);

/// The dense d x k product B * A.
Matrix adapterProduct(const LowRankAdapter& adapter);

/// Several adapters stacked along the rank dimension.
///
/// B is d x (sum of ranks), A is (sum of ranks) x k, and blockRanks records
/// where each source adapter's block starts and ends. The total rank may
/// exceed min(d, k), which is why this is not a LowRankAdapter.
struct StackedAdapter {
    Matrix B;
    Matrix A;
    std::vector<std::size_t> blockRanks;

    std::size_t totalRank() const noexcept { return B.cols(); }
};

/// Stacks adapters in order: B column-wise, A row-wise.
/// Throws ShapeError if d or k differ, or the list is empty.
StackedAdapter concatAdapters(std::span<const LowRankAdapter> adapters);

/// B * A of a stacked adapter, i.e. the sum of every block's product.
Matrix stackedProduct(const StackedAdapter& stacked);

}  // namespace disco
