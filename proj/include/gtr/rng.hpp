#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gtr {

// All randomness in this project flows through explicitly seeded streams.
// A single master seed fans out to independent per-purpose streams via
// derive_seed(master, tag, index); no global RNG state exists anywhere.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Deterministic fan-out: (master seed, purpose tag, index) -> stream seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                    std::uint64_t index = 0) {
    std::uint64_t s = splitmix64(master ^ fnv1a64(tag));
    return splitmix64(s ^ (0x632be59bd9b4e019ull + index));
}

/// Seeded random stream. Wraps mt19937_64 but generates uniform doubles and
/// bounded integers itself so that outputs are bit-identical across standard
/// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n). Rejection sampling, unbiased.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t rem = std::uint64_t(-n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t v = eng_();
            if (v >= rem) return v % n;
        }
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gtr
