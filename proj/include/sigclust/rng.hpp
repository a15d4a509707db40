#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sigclust {

// splitmix64 finaliser, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t salt) {
    return mix64(root ^ mix64(salt));
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(root, a), b);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c) {
    return derive_seed(derive_seed(root, a, b), c);
}

// mt19937_64 with the uniform/normal mappings written out. The std::*_distribution
// adaptors are implementation-defined, so relying on them would tie output streams
// to a particular standard library; the engine itself is fully specified.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0, 1]; never returns 0, so log() is safe.
    double uniform01() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). Modulo bias is negligible for the small n used here.
    std::size_t uniform_below(std::size_t n) {
        return static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(n));
    }

    // Standard normal via Box-Muller; two uniforms per draw, no carried state.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;
    std::mt19937_64 engine_;
};

}  // namespace sigclust
