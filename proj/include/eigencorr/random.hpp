// random.hpp — Deterministic sampling helpers shared by sign flips and pair subsampling

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace eigencorr {

// Uniform draw from [0, n) without modulo bias. The rejection loop keeps the
// result identical across platforms for a given mt19937_64 seed, which the
// reproducibility guarantees rely on.
inline std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("bounded_rand: empty range");
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t x = rng();
    while (x < threshold) x = rng();
    return x % n;
}

// Moves a uniformly chosen k-subset of `items` to the front, in random order.
// Only the first k positions are specified; the tail is whatever the partial
// Fisher-Yates pass leaves behind.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, std::mt19937_64& rng) {
    if (k > items.size()) throw std::invalid_argument("partial_shuffle: k exceeds size");
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t pick = t + static_cast<std::size_t>(bounded_rand(rng, items.size() - t));
        std::swap(items[t], items[pick]);
    }
}

}  // namespace eigencorr
