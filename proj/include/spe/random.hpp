#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace spe {

// Bounded draw in [0, max] by masked rejection on 32-bit Mersenne Twister
// output. Matches the legacy NumPy RandomState interval sampler, so seeded
// permutations agree with the Python tooling the published split came from.
inline std::uint32_t bounded_draw(std::mt19937& rng, std::uint32_t max)
{
    if (max == 0) return 0;
    std::uint32_t mask = max;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    std::uint32_t v;
    do {
        v = static_cast<std::uint32_t>(rng()) & mask;
    } while (v > max);
    return v;
}

/// Seeded permutation of 0..n-1 (Fisher-Yates from the back). Identical to
/// numpy.random.RandomState(seed).permutation(n) for seeds below 2^32.
inline std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    for (std::size_t i = n; i-- > 1;) {
        const auto j = bounded_draw(rng, static_cast<std::uint32_t>(i));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

} // namespace spe
