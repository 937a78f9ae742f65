#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "disco/errors.hpp"
#include "disco/identity.hpp"
#include "disco/ssa.hpp"
#include "test_support.hpp"

using namespace disco;
using disco::testing::randomAdapter;
using disco::testing::referenceCosine;
using disco::testing::referenceWeightedSum;

namespace {

DynamicCache randomCache(std::size_t t, std::size_t d, std::size_t k, std::size_t r,
                         std::mt19937_64& rng) {
    std::normal_distribution<double> g(0, 1);
    DynamicCache cache;
    for (std::size_t i = 0; i < t; ++i) {
        SubspaceEntry e;
        e.adapter = randomAdapter(d, k, r, rng);
        e.globalToken = {{g(rng), g(rng), g(rng), g(rng)}, 1};
        cache.entries.push_back(std::move(e));
    }
    return cache;
}

std::vector<LowRankAdapter> adaptersOf(const DynamicCache& c) {
    std::vector<LowRankAdapter> out;
    for (const auto& e : c.entries) out.push_back(e.adapter);
    return out;
}

ActivationPolicy policy(ActivationKind kind, double eps = 0.05) { return {kind, eps}; }

}  // namespace

TEST(Scores, SelfSimilarityIsOne) {
    const EncoderSpec spec;
    const std::string text = "name the animal in the picture";
    DynamicCache cache;
    SubspaceEntry e;
    e.globalToken = localToken(std::vector<std::string>{text}, spec);
    cache.entries.push_back(e);
    const auto s = scores(cache, text, spec);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s[0], 1.0, 1e-12);
}

TEST(Scores, OrthogonalTokenScoresZero) {
    const EncoderSpec spec;
    const auto enc = encode("apple banana cherry dragon eagle", spec);
    DynamicCache cache;
    SubspaceEntry e;
    e.globalToken = {encode("falcon grape hotel igloo jungle", spec), 3};
    cache.entries.push_back(e);
    EXPECT_EQ(scoresForEncoding(cache, enc)[0], 0.0);
}

TEST(Scores, MatchReferenceCosineScan) {
    const std::vector<std::vector<double>> tokens{{1, 2, 0, 0}, {0, -1, 3, 1}, {0.5, 0.5, 0.5, 0.5}};
    DynamicCache cache;
    for (const auto& t : tokens) {
        SubspaceEntry e;
        e.globalToken = {t, 1};
        cache.entries.push_back(e);
    }
    const std::vector<double> query{0.3, -0.2, 0.9, 0.1};
    const auto s = scoresForEncoding(cache, query);
    for (std::size_t i = 0; i < tokens.size(); ++i) EXPECT_NEAR(s[i], referenceCosine(tokens[i], query), 1e-12);
}

TEST(Scores, ErrorsOnEmptyCacheOrText) {
    const EncoderSpec spec;
    EXPECT_THROW(scores(DynamicCache{}, "hello", spec), Error);
    DynamicCache cache;
    SubspaceEntry e;
    e.globalToken = {encode("hello", spec), 1};
    cache.entries.push_back(e);
    EXPECT_THROW(scores(cache, "   ", spec), DegenerateInputError);
}

TEST(Scores, ScaleInvariantInQuery) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> c(1e-3, 1e3);
    const auto cache = randomCache(4, 3, 3, 1, rng);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> q{u(rng), u(rng), u(rng), u(rng)};
        auto scaled = q;
        const double k = c(rng);
        for (auto& x : scaled) x *= k;
        const auto a = scoresForEncoding(cache, q);
        const auto b = scoresForEncoding(cache, scaled);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
    }
}

TEST(Activations, SoftmaxEqualScoresAreUniform) {
    const auto a = activations(std::vector<double>{0.4, 0.4, 0.4, 0.4}, policy(ActivationKind::Softmax));
    for (double v : a) EXPECT_NEAR(v, 0.25, 1e-15);
}

TEST(Activations, SoftmaxHandExample) {
    const auto a = activations(std::vector<double>{0.9, 0.8}, policy(ActivationKind::Softmax));
    // 1 / (1 + e^-2), frozen from tests/oracles/reference_values.py.
    EXPECT_NEAR(a[0], 0.88079707797788231, 1e-12);
    EXPECT_NEAR(a[1], 1.0 - 0.88079707797788231, 1e-12);
}

TEST(Activations, OtherPolicies) {
    const std::vector<double> s{0.9, 0.8};
    EXPECT_EQ(activations(s, policy(ActivationKind::Argmax)), (std::vector<double>{1, 0}));
    EXPECT_EQ(activations(s, policy(ActivationKind::Concatenate)), (std::vector<double>{1, 1}));
    EXPECT_EQ(activations(s, policy(ActivationKind::CosineRaw)), s);
    EXPECT_EQ(activations(std::vector<double>{0.5, 0.7, 0.7}, policy(ActivationKind::Argmax)),
              (std::vector<double>{0, 1, 0}));
}

TEST(Activations, SoftmaxStableAtExtremes) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> s(-1, 1);
    for (double eps : {1e-9, 1e-6, 0.05, 1.0, 1e6}) {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x(6);
            for (auto& v : x) v = s(rng);
            const auto a = activations(x, policy(ActivationKind::Softmax, eps));
            double sum = 0;
            for (double v : a) {
                EXPECT_TRUE(std::isfinite(v));
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
                sum += v;
            }
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
    }
}

TEST(Activations, Errors) {
    EXPECT_THROW(activations(std::vector<double>{}, policy(ActivationKind::Softmax)), Error);
    EXPECT_THROW(activations(std::vector<double>{0.1}, policy(ActivationKind::Softmax, 0.0)), ConfigError);
    EXPECT_THROW(parseActivationKind("TopK"), ConfigError);
}

TEST(Assemble, OneHotSelectsSingleSubspace) {
    std::mt19937_64 rng(4);
    const auto cache = randomCache(3, 5, 4, 2, rng);
    const auto dw = assemble(cache, std::vector<double>{0, 1, 0});
    EXPECT_LT(maxAbsDiff(dw, adapterProduct(cache.entries[1].adapter)), 1e-15);
}

TEST(Assemble, ZeroActivationGivesZero) {
    std::mt19937_64 rng(5);
    const auto cache = randomCache(3, 5, 4, 2, rng);
    EXPECT_EQ(assemble(cache, std::vector<double>{0, 0, 0}).maxAbs(), 0.0);
}

TEST(Assemble, MatchesBruteForceSum) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> a(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cache = randomCache(3, 6, 6, 2, rng);
        const std::vector<double> alpha{a(rng), a(rng), a(rng)};
        EXPECT_LT(maxAbsDiff(assemble(cache, alpha), referenceWeightedSum(adaptersOf(cache), alpha)), 1e-12);
    }
}

TEST(Assemble, LinearInActivation) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> a(-2, 2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto cache = randomCache(4, 5, 7, 3, rng);
        std::vector<double> x(4), y(4), xy(4);
        for (std::size_t i = 0; i < 4; ++i) {
            x[i] = a(rng);
            y[i] = a(rng);
            xy[i] = x[i] + y[i];
        }
        EXPECT_LT(maxAbsDiff(assemble(cache, xy), assemble(cache, x) + assemble(cache, y)), 1e-12);
    }
}

TEST(Assemble, SoftmaxApproachesArgmaxAsTemperatureVanishes) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto cache = randomCache(4, 5, 5, 2, rng);
        std::vector<double> s{0.1, 0.4, 0.35, -0.2};
        std::shuffle(s.begin(), s.end(), rng);
        const auto soft = assemble(cache, activations(s, policy(ActivationKind::Softmax, 1e-6)));
        const auto hard = assemble(cache, activations(s, policy(ActivationKind::Argmax)));
        double scale = 0;
        for (const auto& e : cache.entries) scale = std::max(scale, adapterProduct(e.adapter).maxAbs());
        EXPECT_LT(maxAbsDiff(soft, hard), 1e-6 * scale);
    }
}

TEST(Assemble, ShapeMismatch) {
    std::mt19937_64 rng(9);
    const auto cache = randomCache(3, 4, 4, 2, rng);
    EXPECT_THROW(assemble(cache, std::vector<double>{1, 0}), ShapeError);
    EXPECT_THROW(assemble(DynamicCache{}, std::vector<double>{}), Error);
}
