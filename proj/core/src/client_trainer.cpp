#include "disco/client_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

Vector predict(const Matrix& base, const Matrix& delta, std::span<const double> x) {
    requireSameShape(base, delta, "predict");
    if (x.size() != base.cols()) {
        throw ShapeError(fmt::format("predict: input of {} for a {}x{} model", x.size(),
                                     base.rows(), base.cols()));
    }
    Vector scores(base.rows());
    for (std::size_t i = 0; i < base.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < base.cols(); ++j) s += (base(i, j) + delta(i, j)) * x[j];
        scores[i] = s;
    }
    return scores;
}

std::size_t argmax(std::span<const double> scores) {
    if (scores.empty()) throw ShapeError("argmax of an empty score vector");
    return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) -
                                    scores.begin());
}

LossAndGradient crossEntropyGradient(const Matrix& base, const LowRankAdapter& adapter,
                                     std::span<const Example> batch) {
    if (batch.empty()) throw Error("cannot compute a gradient over an empty batch");
    const Matrix delta = adapterProduct(adapter);
    const std::size_t classes = base.rows();
    const std::size_t inputs = base.cols();

    LossAndGradient out;
    out.gradW = Matrix(classes, inputs);
    Vector p(classes);
    for (const auto& e : batch) {
        if (e.label >= classes) throw ShapeError(fmt::format("label {} out of range", e.label));
        const Vector s = predict(base, delta, e.x);
        const double top = *std::max_element(s.begin(), s.end());
        double z = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            p[c] = std::exp(s[c] - top);
            z += p[c];
        }
        out.loss += std::log(z) + top - s[e.label];
        for (std::size_t c = 0; c < classes; ++c) {
            const double g = p[c] / z - (c == e.label ? 1.0 : 0.0);
            for (std::size_t j = 0; j < inputs; ++j) out.gradW(c, j) += g * e.x[j];
        }
    }
    const double n = static_cast<double>(batch.size());
    out.loss /= n;
    out.gradW *= 1.0 / n;
    out.gradB = matmulTransposedRhs(out.gradW, adapter.A);
    out.gradA = matmulTransposedLhs(adapter.B, out.gradW);
    return out;
}

ClientUpdate localTrain(const ClientModel& model, std::span<const Example> shard,
                        const EncoderSpec& encoder, ClientId clientId) {
    if (shard.empty()) throw Error(fmt::format("client {} has an empty shard", clientId));
    if (!(model.learningRate >= 0.0)) throw ConfigError("learning rate must be >= 0");
    requireSameShape(model.base, adapterProduct(model.adapter), "localTrain");

    LowRankAdapter adapter = model.adapter;
    for (std::size_t epoch = 0; epoch < model.epochs; ++epoch) {
        const auto grad = crossEntropyGradient(model.base, adapter, shard);
        for (std::size_t i = 0; i < adapter.B.size(); ++i)
            adapter.B.data()[i] -= model.learningRate * grad.gradB.data()[i];
        for (std::size_t i = 0; i < adapter.A.size(); ++i)
            adapter.A.data()[i] -= model.learningRate * grad.gradA.data()[i];
        if (!adapter.B.allFinite() || !adapter.A.allFinite() || !std::isfinite(grad.loss)) {
            throw NumericError(fmt::format("client {} diverged at epoch {} (loss {})", clientId,
                                           epoch, grad.loss));
        }
    }

    std::vector<std::string> instructions;
    instructions.reserve(shard.size());
    for (const auto& e : shard) instructions.push_back(e.instruction);

    ClientUpdate update;
    update.adapter = std::move(adapter);
    update.localToken = localToken(instructions, encoder);
    update.sampleCount = shard.size();
    update.clientId = clientId;
    return update;
}

double accuracyPercent(const Matrix& base, const Matrix& delta, std::span<const Example> examples) {
    if (examples.empty()) throw Error("accuracy over an empty example set");
    std::size_t correct = 0;
    for (const auto& e : examples)
        if (argmax(predict(base, delta, e.x)) == e.label) ++correct;
    return 100.0 * static_cast<double>(correct) / static_cast<double>(examples.size());
}

}  // namespace disco
