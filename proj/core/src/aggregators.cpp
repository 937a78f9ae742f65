#include "disco/aggregators.hpp"

#include <array>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

namespace {

constexpr std::array<std::pair<AggregatorKind, std::string_view>, 5> kNames{{
    {AggregatorKind::FedAvg, "FedAvg"},
    {AggregatorKind::FedAvgM, "FedAvgM"},
    {AggregatorKind::FedAdam, "FedAdam"},
    {AggregatorKind::FedAdagrad, "FedAdagrad"},
    {AggregatorKind::FedYogi, "FedYogi"},
}};

double sign(double x) noexcept { return static_cast<double>((0.0 < x) - (x < 0.0)); }

// Applies `step` elementwise over (previous, delta, m, v) of one matrix.
template <typename Step>
void applyElementwise(Matrix& out, const Matrix& delta, Matrix& m, Matrix& v, Step step) {
    auto o = out.data();
    auto d = delta.data();
    auto md = m.data();
    auto vd = v.data();
    for (std::size_t i = 0; i < o.size(); ++i) step(o[i], d[i], md[i], vd[i]);
}

}  // namespace

std::string_view toString(AggregatorKind kind) noexcept {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "unknown";
}

AggregatorKind parseAggregatorKind(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    throw ConfigError(fmt::format("unknown aggregator '{}'", name));
}

void AggregatorSpec::validate() const {
    if (!(serverLearningRate > 0.0)) throw ConfigError("server learning rate must be > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must lie in [0, 1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("beta2 must lie in [0, 1)");
    if (!(adaptivity > 0.0)) throw ConfigError("adaptivity floor must be > 0");
}

AggregatorState AggregatorState::zerosLike(const LowRankAdapter& like) {
    auto zeros = LowRankAdapter::zeros(like.outDim(), like.inDim(), like.rank());
    return AggregatorState{zeros, zeros};
}

LowRankAdapter fedAvg(std::span<const LowRankAdapter> params, std::span<const double> weights) {
    if (params.empty()) throw ConfigError("fedAvg needs at least one adapter");
    if (params.size() != weights.size()) {
        throw ConfigError(fmt::format("fedAvg: {} adapters but {} weights", params.size(),
                                      weights.size()));
    }
    for (double w : weights)
        if (!(w > 0.0)) throw ConfigError("fedAvg weights must be positive");
    for (const auto& p : params) requireSameShape(p, params.front(), "fedAvg");

    // Incremental mean: mean += (w / W) * (p - mean). Identical inputs give the
    // input back exactly, which a sum-then-divide does not guarantee.
    Matrix b = params.front().B;
    Matrix a = params.front().A;
    double seen = weights.front();
    for (std::size_t j = 1; j < params.size(); ++j) {
        seen += weights[j];
        const double f = weights[j] / seen;
        auto pb = params[j].B.data();
        auto pa = params[j].A.data();
        auto ob = b.data();
        auto oa = a.data();
        for (std::size_t i = 0; i < ob.size(); ++i) ob[i] += f * (pb[i] - ob[i]);
        for (std::size_t i = 0; i < oa.size(); ++i) oa[i] += f * (pa[i] - oa[i]);
    }
    return LowRankAdapter(std::move(b), std::move(a));
}

LowRankAdapter pseudoGradient(const LowRankAdapter& previous, const LowRankAdapter& aggregated) {
    requireSameShape(previous, aggregated, "pseudoGradient");
    return LowRankAdapter(aggregated.B - previous.B, aggregated.A - previous.A);
}

FedOptResult fedOpt(const LowRankAdapter& previous, std::span<const LowRankAdapter> params,
                    std::span<const double> weights, const AggregatorSpec& spec,
                    const AggregatorState& state) {
    spec.validate();
    LowRankAdapter averaged = fedAvg(params, weights);
    if (spec.kind == AggregatorKind::FedAvg) return {std::move(averaged), state};

    requireSameShape(state.momentum, previous, "fedOpt momentum");
    requireSameShape(state.secondMoment, previous, "fedOpt second moment");
    const LowRankAdapter delta = pseudoGradient(previous, averaged);

    FedOptResult out{previous, state};
    const double lr = spec.serverLearningRate;
    const double b1 = spec.beta1;
    const double b2 = spec.beta2;
    const double tau = spec.adaptivity;

    auto step = [&](double& p, double d, double& m, double& v) {
        switch (spec.kind) {
            case AggregatorKind::FedAvgM:
                m = b1 * m + d;
                p += lr * m;
                return;
            case AggregatorKind::FedAdam:
                m = b1 * m + (1.0 - b1) * d;
                v = b2 * v + (1.0 - b2) * d * d;
                break;
            case AggregatorKind::FedAdagrad:
                m = b1 * m + (1.0 - b1) * d;
                v = v + d * d;
                break;
            case AggregatorKind::FedYogi:
                m = b1 * m + (1.0 - b1) * d;
                v = v - (1.0 - b2) * d * d * sign(v - d * d);
                if (v < 0.0) v = 0.0;
                break;
            case AggregatorKind::FedAvg:
                return;
        }
        p += lr * m / (std::sqrt(v) + tau);
    };

    applyElementwise(out.adapter.B, delta.B, out.state.momentum.B, out.state.secondMoment.B, step);
    applyElementwise(out.adapter.A, delta.A, out.state.momentum.A, out.state.secondMoment.A, step);

    if (!out.adapter.B.allFinite() || !out.adapter.A.allFinite() ||
        !out.state.momentum.B.allFinite() || !out.state.momentum.A.allFinite() ||
        !out.state.secondMoment.B.allFinite() || !out.state.secondMoment.A.allFinite()) {
        throw NumericError(fmt::format("{} produced a non-finite value", toString(spec.kind)));
    }
    return out;
}

}  // namespace disco
