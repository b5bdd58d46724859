#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace strent {

// Reproducible random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; all distributions are implemented here
// rather than through <random> distributions, which vary between standard
// library vendors.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64/splitmix64";

    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Uniform integer on [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n);
    // Standard normal via Box-Muller (no cached second value).
    double normal();

    // Independent child stream; depends only on this generator's seed and
    // `stream`, never on how many values were drawn.
    Rng split(std::uint64_t stream) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace strent
