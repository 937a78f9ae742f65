#include "disco/identity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "disco/errors.hpp"

namespace disco {

void EncoderSpec::validate() const {
    if (dimension < 2) throw ConfigError(fmt::format("encoder dimension {} < 2", dimension));
    if (algorithm != kHashedBagOfTokens) {
        throw ConfigError(fmt::format("unknown encoder algorithm '{}'", algorithm));
    }
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = kFnvOffsetBasis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

namespace {

bool isSpace(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<std::string_view> splitTokens(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && isSpace(text[i])) ++i;
        const std::size_t start = i;
        while (i < text.size() && !isSpace(text[i])) ++i;
        if (i > start) tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

Vector normalized(std::span<const double> v) {
    const double n = norm2(v);
    if (!(n > 0.0)) throw DegenerateInputError("cannot normalize a zero-norm vector");
    Vector out(v.begin(), v.end());
    for (double& x : out) x /= n;
    return out;
}

Vector encode(std::string_view text, const EncoderSpec& spec) {
    spec.validate();
    const auto tokens = splitTokens(text);
    if (tokens.empty()) throw DegenerateInputError("cannot encode an empty instruction");
    Vector buckets(spec.dimension, 0.0);
    for (auto token : tokens) buckets[fnv1a64(token) % spec.dimension] += 1.0;
    return normalized(buckets);
}

IdentityToken localToken(std::span<const std::string> texts, const EncoderSpec& spec) {
    if (texts.empty()) throw DegenerateInputError("identity token needs at least one instruction");
    std::vector<Vector> encodings;
    encodings.reserve(texts.size());
    for (const auto& t : texts) encodings.push_back(encode(t, spec));
    // Floating-point sums depend on order; a canonical order makes the token
    // independent of how the shard was listed.
    std::sort(encodings.begin(), encodings.end());

    Vector mean(spec.dimension, 0.0);
    for (const auto& e : encodings)
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += e[i];
    const double n = static_cast<double>(texts.size());
    for (double& v : mean) v /= n;
    return IdentityToken{normalized(mean), texts.size()};
}

}  // namespace disco
