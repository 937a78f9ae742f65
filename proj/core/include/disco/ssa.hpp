#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "disco/dko_server.hpp"
#include "disco/identity.hpp"
#include "disco/matrix.hpp"

namespace disco {

enum class ActivationKind { Softmax, Argmax, Concatenate, CosineRaw };

std::string_view toString(ActivationKind kind) noexcept;
ActivationKind parseActivationKind(std::string_view name);

struct ActivationPolicy {
    ActivationKind kind = ActivationKind::Softmax;
    /// Softmax temperature.
    double temperature = 0.05;

    void validate() const;
};

/// Activation factor per cache entry, in cache order.
using ActivationVector = std::vector<double>;

/// Cosine between each entry's global token and the encoded test instruction.
/// Throws Error on an empty cache and DegenerateInputError on empty text.
std::vector<double> scores(const DynamicCache& cache, std::string_view testText,
                           const EncoderSpec& spec);

/// Same as scores() for an already-encoded query.
std::vector<double> scoresForEncoding(const DynamicCache& cache, std::span<const double> query);

ActivationVector activations(std::span<const double> scores, const ActivationPolicy& policy);

/// Delta W = B_stack * blockdiag(a_1 I, ..., a_T I) * A_stack.
Matrix assemble(const DynamicCache& cache, std::span<const double> activation);

/// Pre-stacked cache for repeated assembly against a fixed snapshot.
class SubspaceAssembler {
public:
    explicit SubspaceAssembler(const DynamicCache& cache);

    std::size_t subspaceCount() const noexcept { return stacked_.blockRanks.size(); }
    Matrix assemble(std::span<const double> activation) const;

private:
    StackedAdapter stacked_;
};

}  // namespace disco
