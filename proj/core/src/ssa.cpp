#include "disco/ssa.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

namespace {

constexpr std::array<std::pair<ActivationKind, std::string_view>, 4> kNames{{
    {ActivationKind::Softmax, "Softmax"},
    {ActivationKind::Argmax, "Argmax"},
    {ActivationKind::Concatenate, "Concatenate"},
    {ActivationKind::CosineRaw, "CosineRaw"},
}};

std::vector<LowRankAdapter> adaptersOf(const DynamicCache& cache) {
    std::vector<LowRankAdapter> out;
    out.reserve(cache.entries.size());
    for (const auto& e : cache.entries) out.push_back(e.adapter);
    return out;
}

}  // namespace

std::string_view toString(ActivationKind kind) noexcept {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "unknown";
}

ActivationKind parseActivationKind(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    throw ConfigError(fmt::format("unknown activation policy '{}'", name));
}

void ActivationPolicy::validate() const {
    if (!(temperature > 0.0)) throw ConfigError("activation temperature must be > 0");
}

std::vector<double> scoresForEncoding(const DynamicCache& cache, std::span<const double> query) {
    if (cache.empty()) throw Error("cannot score an empty cache");
    std::vector<double> s;
    s.reserve(cache.size());
    for (const auto& e : cache.entries) s.push_back(cosine(e.globalToken.vector, query));
    return s;
}

std::vector<double> scores(const DynamicCache& cache, std::string_view testText,
                           const EncoderSpec& spec) {
    if (cache.empty()) throw Error("cannot score an empty cache");
    return scoresForEncoding(cache, encode(testText, spec));
}

ActivationVector activations(std::span<const double> s, const ActivationPolicy& policy) {
    if (s.empty()) throw Error("activations need at least one score");
    policy.validate();
    ActivationVector a(s.size(), 0.0);
    switch (policy.kind) {
        case ActivationKind::Softmax: {
            const double top = *std::max_element(s.begin(), s.end());
            double z = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                a[i] = std::exp((s[i] - top) / policy.temperature);
                z += a[i];
            }
            for (double& v : a) v /= z;
            break;
        }
        case ActivationKind::Argmax: {
            // max_element returns the first maximum, so ties go to the lowest index.
            a[static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin())] = 1.0;
            break;
        }
        case ActivationKind::Concatenate:
            std::fill(a.begin(), a.end(), 1.0);
            break;
        case ActivationKind::CosineRaw:
            std::copy(s.begin(), s.end(), a.begin());
            break;
    }
    return a;
}

SubspaceAssembler::SubspaceAssembler(const DynamicCache& cache) {
    if (cache.empty()) throw Error("cannot assemble an empty cache");
    const auto adapters = adaptersOf(cache);
    stacked_ = concatAdapters(adapters);
}

Matrix SubspaceAssembler::assemble(std::span<const double> activation) const {
    if (activation.size() != stacked_.blockRanks.size()) {
        throw ShapeError(fmt::format("{} activation factors for {} subspaces", activation.size(),
                                     stacked_.blockRanks.size()));
    }
    // B_stack * blockdiag(alpha_i I): scale each block of columns of B_stack.
    Matrix scaled = stacked_.B;
    std::size_t offset = 0;
    for (std::size_t block = 0; block < stacked_.blockRanks.size(); ++block) {
        const std::size_t r = stacked_.blockRanks[block];
        for (std::size_t i = 0; i < scaled.rows(); ++i)
            for (std::size_t j = offset; j < offset + r; ++j) scaled(i, j) *= activation[block];
        offset += r;
    }
    return matmul(scaled, stacked_.A);
}

Matrix assemble(const DynamicCache& cache, std::span<const double> activation) {
    return SubspaceAssembler(cache).assemble(activation);
}

}  // namespace disco
