#pragma once

#include <cstddef>
#include <span>

#include "disco/dko_server.hpp"
#include "disco/identity.hpp"
#include "disco/lowrank.hpp"
#include "disco/matrix.hpp"
#include "disco/synth_bench.hpp"

namespace disco {

/// Frozen base weights plus the trainable adapter of one client.
struct ClientModel {
    Matrix base;
    LowRankAdapter adapter;
    double learningRate = 0.05;
    std::size_t epochs = 1;
};

/// (base + delta) * x. Throws ShapeError on mismatch.
Vector predict(const Matrix& base, const Matrix& delta, std::span<const double> x);

/// Index of the largest score; ties go to the lowest index.
std::size_t argmax(std::span<const double> scores);

struct LossAndGradient {
    double loss = 0.0;
    /// dL/dW, averaged over the batch.
    Matrix gradW;
    Matrix gradB;
    Matrix gradA;
};

/// Mean softmax cross-entropy of base + B*A over `batch` and its gradients.
LossAndGradient crossEntropyGradient(const Matrix& base, const LowRankAdapter& adapter,
                                     std::span<const Example> batch);

/// Full-batch gradient descent on B and A for `model.epochs` passes.
/// Returns the trained adapter with the shard's identity token.
/// Throws Error for an empty shard and NumericError on divergence.
ClientUpdate localTrain(const ClientModel& model, std::span<const Example> shard,
                        const EncoderSpec& encoder, ClientId clientId = 0);

/// Fraction of `examples` classified correctly under base + delta, in percent.
double accuracyPercent(const Matrix& base, const Matrix& delta, std::span<const Example> examples);

}  // namespace disco
