#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "disco/matrix.hpp"

namespace disco {

/// Configuration of the instruction text encoder.
///
/// The only algorithm is a hashed bag of whitespace-delimited tokens: each
/// token is hashed with 64-bit FNV-1a, the hash modulo `dimension` selects a
/// bucket that is incremented, and the bucket vector is L2-normalized.
struct EncoderSpec {
    static constexpr std::string_view kHashedBagOfTokens = "fnv1a64-bag-of-tokens";

    std::size_t dimension = 64;
    std::string algorithm{kHashedBagOfTokens};

    /// Throws ConfigError for dimension < 2 or an unknown algorithm.
    void validate() const;

    friend bool operator==(const EncoderSpec&, const EncoderSpec&) = default;
};

/// A task fingerprint: a direction in encoder space plus the number of
/// samples that formed it.
///
/// Local tokens produced by localToken() are unit-norm. Global tokens held in
/// the server cache are sample-weighted running means of local tokens and are
/// stored without renormalization; consumers compare directions only.
struct IdentityToken {
    Vector vector;
    std::size_t supportCount = 0;

    friend bool operator==(const IdentityToken&, const IdentityToken&) = default;
};

inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Splits on ASCII whitespace; empty tokens are dropped.
std::vector<std::string_view> splitTokens(std::string_view text);

/// Unit-norm hashed bag-of-tokens encoding.
/// Throws DegenerateInputError for empty or whitespace-only text.
Vector encode(std::string_view text, const EncoderSpec& spec);

/// Unit-normalized mean encoding of a client's instructions.
///
/// The encodings are summed in a canonical (lexicographic) order so the
/// result does not depend on the order of `texts`.
IdentityToken localToken(std::span<const std::string> texts, const EncoderSpec& spec);

/// Copy of `v` scaled to unit length; throws DegenerateInputError on zero norm.
Vector normalized(std::span<const double> v);

}  // namespace disco
