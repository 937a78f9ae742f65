#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

#include "disco/lowrank.hpp"

namespace disco {

enum class AggregatorKind { FedAvg, FedAvgM, FedAdam, FedAdagrad, FedYogi };

std::string_view toString(AggregatorKind kind) noexcept;
/// Throws ConfigError for an unknown name.
AggregatorKind parseAggregatorKind(std::string_view name);

/// The server-side combination rule applied per subspace.
struct AggregatorSpec {
    AggregatorKind kind = AggregatorKind::FedAvg;
    double serverLearningRate = 1.0;
    double beta1 = 0.9;
    double beta2 = 0.99;
    double adaptivity = 1e-3;

    void validate() const;
};

/// Adapter-shaped first and second moments of a server optimizer.
struct AggregatorState {
    LowRankAdapter momentum;
    LowRankAdapter secondMoment;

    /// Zero state shaped like `like`.
    static AggregatorState zerosLike(const LowRankAdapter& like);

    friend bool operator==(const AggregatorState&, const AggregatorState&) = default;
};

/// Sample-weighted elementwise mean of B and A independently.
/// Throws ShapeError on mismatched shapes and ConfigError on bad weights.
LowRankAdapter fedAvg(std::span<const LowRankAdapter> params, std::span<const double> weights);

/// aggregated - previous, elementwise.
LowRankAdapter pseudoGradient(const LowRankAdapter& previous, const LowRankAdapter& aggregated);

struct FedOptResult {
    LowRankAdapter adapter;
    AggregatorState state;
};

/// One server optimizer step on the pseudo-gradient fedAvg(params) - previous.
/// FedYogi's second moment is clamped at zero. Throws NumericError if any
/// intermediate value is not finite.
FedOptResult fedOpt(const LowRankAdapter& previous, std::span<const LowRankAdapter> params,
                    std::span<const double> weights, const AggregatorSpec& spec,
                    const AggregatorState& state);

}  // namespace disco
