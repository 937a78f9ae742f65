#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "disco/errors.hpp"
#include "disco/lowrank.hpp"
#include "test_support.hpp"

using namespace disco;
using disco::testing::randomAdapter;
using disco::testing::randomMatrix;
using disco::testing::referenceProduct;
using disco::testing::referenceWeightedSum;

TEST(Matrix, RejectsWrongEntryCount) {
    EXPECT_THROW(Matrix(2, 3, std::vector<double>(5)), ShapeError);
}

TEST(Matrix, MatmulShapeMismatch) {
    EXPECT_THROW(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
}

TEST(Matrix, TransposedProductsAgreeWithExplicitTranspose) {
    std::mt19937_64 rng(3);
    const Matrix a = randomMatrix(4, 5, rng);
    const Matrix b = randomMatrix(6, 5, rng);
    const Matrix c = randomMatrix(4, 3, rng);
    EXPECT_LT(maxAbsDiff(matmulTransposedRhs(a, b), referenceProduct(a, b.transposed())), 1e-12);
    EXPECT_LT(maxAbsDiff(matmulTransposedLhs(a, c), referenceProduct(a.transposed(), c)), 1e-12);
}

TEST(Cosine, IdenticalOrthogonalAndThreeFourFive) {
    EXPECT_DOUBLE_EQ(cosine(std::vector<double>{1, 0}, std::vector<double>{1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
    EXPECT_NEAR(cosine(std::vector<double>{3, 4}, std::vector<double>{1, 0}), 0.6, 1e-15);
}

TEST(Cosine, ZeroNormIsDegenerate) {
    EXPECT_THROW(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}), DegenerateInputError);
    EXPECT_THROW(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 0}), DegenerateInputError);
}

TEST(Cosine, SymmetricAndScaleInvariant) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(7), b(7);
        for (auto& x : a) x = u(rng);
        for (auto& x : b) x = u(rng);
        const double c = scale(rng);
        std::vector<double> ca = a;
        for (auto& x : ca) x *= c;
        EXPECT_NEAR(cosine(a, b), cosine(b, a), 1e-12);
        EXPECT_NEAR(cosine(ca, b), cosine(a, b), 1e-12);
    }
}

TEST(LowRankAdapter, EnforcesRankInvariants) {
    EXPECT_THROW(LowRankAdapter(Matrix(3, 2), Matrix(3, 4)), ShapeError);
    EXPECT_THROW(LowRankAdapter(Matrix(2, 3), Matrix(3, 4)), ShapeError);  // rank 3 > min(2, 4)
    EXPECT_THROW(LowRankAdapter(Matrix(2, 0), Matrix(0, 4)), ShapeError);
    EXPECT_NO_THROW(LowRankAdapter(Matrix(2, 2), Matrix(2, 4)));
}

TEST(AdapterProduct, ZeroB) {
    std::mt19937_64 rng(1);
    const LowRankAdapter a(Matrix(3, 2), randomMatrix(2, 4, rng));
    EXPECT_EQ(adapterProduct(a), Matrix(3, 4));
}

TEST(AdapterProduct, HandOuterProduct) {
    const LowRankAdapter a(Matrix{{1}, {2}}, Matrix{{3, 4}});
    EXPECT_EQ(adapterProduct(a), (Matrix{{3, 4}, {6, 8}}));
}

TEST(AdapterProduct, IdentityFactor) {
    std::mt19937_64 rng(2);
    const Matrix m = randomMatrix(3, 5, rng);
    EXPECT_EQ(adapterProduct(LowRankAdapter(Matrix::identity(3), m)), m);
}

TEST(ConcatAdapters, SingletonIsItself) {
    std::mt19937_64 rng(4);
    const auto a = randomAdapter(4, 6, 2, rng);
    const auto s = concatAdapters(std::vector{a});
    EXPECT_EQ(s.B, a.B);
    EXPECT_EQ(s.A, a.A);
    EXPECT_EQ(s.blockRanks, std::vector<std::size_t>{2});
}

TEST(ConcatAdapters, TwoRankEightGiveRankSixteen) {
    std::mt19937_64 rng(5);
    const std::vector adapters{randomAdapter(8, 16, 8, rng), randomAdapter(8, 16, 8, rng)};
    const auto s = concatAdapters(adapters);
    EXPECT_EQ(s.B.rows(), 8u);
    EXPECT_EQ(s.B.cols(), 16u);
    EXPECT_EQ(s.A.rows(), 16u);
    EXPECT_EQ(s.A.cols(), 16u);
    EXPECT_EQ(s.totalRank(), 16u);
    // Order is preserved: the second block starts at column 8.
    EXPECT_EQ(s.B(3, 8), adapters[1].B(3, 0));
    EXPECT_EQ(s.A(9, 5), adapters[1].A(1, 5));
}

TEST(ConcatAdapters, MismatchedShapesThrow) {
    std::mt19937_64 rng(6);
    const std::vector adapters{randomAdapter(4, 5, 2, rng), randomAdapter(4, 6, 2, rng)};
    EXPECT_THROW(concatAdapters(adapters), ShapeError);
    EXPECT_THROW(concatAdapters(std::vector<LowRankAdapter>{}), ShapeError);
}

TEST(ConcatAdapters, StackedProductEqualsSumOfProducts) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    std::uniform_int_distribution<std::size_t> count(1, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = dim(rng), k = dim(rng);
        const std::size_t maxRank = std::min<std::size_t>({d, k, 4});
        std::uniform_int_distribution<std::size_t> rank(1, maxRank);
        std::vector<LowRankAdapter> adapters;
        const std::size_t t = count(rng);
        for (std::size_t i = 0; i < t; ++i) adapters.push_back(randomAdapter(d, k, rank(rng), rng));
        const Matrix expected = referenceWeightedSum(adapters, std::vector<double>(t, 1.0));
        EXPECT_LT(maxAbsDiff(stackedProduct(concatAdapters(adapters)), expected), 1e-12);
    }
}
