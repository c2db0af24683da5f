#ifndef DNASTORE_RNG_HPP
#define DNASTORE_RNG_HPP

#include <cstdint>
#include <cstddef>
#include <vector>

namespace dnastore {

// SplitMix64 output function. All randomness in the library flows through
// this mixer so that results are bit-identical across platforms; nothing
// here depends on implementation-defined std::random behaviour.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ULL;

/// Counter-based SplitMix64 stream: block i (8 bytes, little-endian) is
/// splitmix64_mix(seed + (i+1)*gamma). The keystream for data randomization
/// is frozen to exactly this definition; stored pools depend on it.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += kSplitMix64Gamma;
        return splitmix64_mix(state_);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n). n must be > 0. Modulo reduction; the bias is
    /// ~n/2^64 and irrelevant at the ranges used here.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

/// Mix an arbitrary number of 64-bit words into one derived seed.
inline std::uint64_t derive_seed(std::uint64_t seed) { return splitmix64_mix(seed + kSplitMix64Gamma); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t word, Rest... rest) {
    return derive_seed(splitmix64_mix(seed ^ (word + kSplitMix64Gamma)), rest...);
}

} // namespace dnastore

#endif
