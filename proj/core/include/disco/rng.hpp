#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace disco {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for an independent stream, keyed by a purpose tag and indices.
/// Streams keyed differently never share draws, so adding a consumer never
/// shifts another consumer's sequence.
inline std::uint64_t deriveSeed(std::uint64_t base, std::string_view tag,
                                std::initializer_list<std::uint64_t> indices = {}) noexcept {
    std::uint64_t h = splitmix64(base);
    for (unsigned char c : tag) h = splitmix64(h ^ c);
    for (std::uint64_t i : indices) h = splitmix64(h ^ splitmix64(i));
    return h;
}

}  // namespace disco
