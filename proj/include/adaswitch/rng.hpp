#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace adaswitch {

/// Identifier written into reports so runs can be replayed by any
/// implementation of the same generator: 64-bit Mersenne Twister
/// (std::mt19937_64 seeded with the integer seed), doubles from the top 53 bits.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64/top53";

/// Seedable generator with a portable double conversion. std::uniform_real_distribution
/// is avoided because its output differs between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1, 1).
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

    /// Child generator for cell `index` of a sweep seeded by `base`.
    static Rng split(std::uint64_t base, std::uint64_t index) { return Rng(base + index); }

private:
    std::mt19937_64 engine_;
};

}  // namespace adaswitch
