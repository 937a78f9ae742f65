#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "disco/client_trainer.hpp"
#include "disco/dko_server.hpp"
#include "disco/identity.hpp"
#include "disco/ssa.hpp"

using namespace disco;

namespace {

Matrix randomMatrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    return m;
}

DynamicCache randomCache(std::size_t entries, std::size_t d, std::size_t k, std::size_t r) {
    std::mt19937_64 rng(1);
    DynamicCache cache;
    for (std::size_t e = 0; e < entries; ++e) {
        SubspaceEntry entry;
        entry.adapter = LowRankAdapter(randomMatrix(d, r, rng, 1), randomMatrix(r, k, rng, 1));
        entry.globalToken = IdentityToken{encode("task " + std::to_string(e), EncoderSpec{}), 10};
        entry.optimizerState = AggregatorState::zerosLike(entry.adapter);
        cache.entries.push_back(std::move(entry));
    }
    return cache;
}

void BM_Encode(benchmark::State& state) {
    const std::string text = "describe the chart and answer the question about the figure quickly";
    for (auto _ : state) benchmark::DoNotOptimize(encode(text, EncoderSpec{}));
}
BENCHMARK(BM_Encode);

void BM_Assemble(benchmark::State& state) {
    const auto cache = randomCache(static_cast<std::size_t>(state.range(0)), 64, 64, 8);
    const SubspaceAssembler assembler(cache);
    const auto alpha = activations(scores(cache, "task 1 query", EncoderSpec{}), ActivationPolicy{});
    for (auto _ : state) benchmark::DoNotOptimize(assembler.assemble(alpha));
}
BENCHMARK(BM_Assemble)->Arg(1)->Arg(4)->Arg(16);

void BM_ServerRound(benchmark::State& state) {
    const auto cache = randomCache(4, 8, 16, 8);
    std::mt19937_64 rng(2);
    std::vector<ClientUpdate> updates;
    for (ClientId c = 0; c < static_cast<ClientId>(state.range(0)); ++c) {
        ClientUpdate u;
        u.adapter = LowRankAdapter(randomMatrix(8, 8, rng, 1), randomMatrix(8, 16, rng, 1));
        // Most clients match an existing entry; every sixth brings a new task.
        const bool novel = c % 6 == 5;
        u.localToken.vector = novel ? encode("novel words " + std::to_string(c), EncoderSpec{})
                                    : cache.entries[c % 4].globalToken.vector;
        u.localToken.supportCount = 20;
        u.sampleCount = 20;
        u.clientId = c;
        updates.push_back(std::move(u));
    }
    for (auto _ : state) benchmark::DoNotOptimize(serverRound(updates, cache, AggregatorSpec{}));
}
BENCHMARK(BM_ServerRound)->Arg(5)->Arg(50);

void BM_LocalTrain(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 1);
    ClientModel model{randomMatrix(8, 16, rng, 0.1),
                      LowRankAdapter(Matrix(8, 8), randomMatrix(8, 16, rng, 0.01)), 0.3, 25};
    std::vector<Example> shard(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < shard.size(); ++i) {
        shard[i].x.resize(16);
        for (auto& v : shard[i].x) v = g(rng);
        shard[i].label = i % 8;
        shard[i].instruction = "classify the chart";
    }
    for (auto _ : state) benchmark::DoNotOptimize(localTrain(model, shard, EncoderSpec{}));
}
BENCHMARK(BM_LocalTrain)->Arg(8)->Arg(80);

}  // namespace
BENCHMARK_MAIN();
