#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace lexsel {

/// Counter-based splitmix64 stream.
///
/// Every stochastic routine in the library draws from an Rng that is forked
/// from a master seed plus one or two stream indices (selection event, trial,
/// generation). Stream identity is pure data, so work can be sharded across
/// threads in any order and still reproduce bit-identical results.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent stream for (seed, a, b). Forking never mutates the parent.
    static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        std::uint64_t s = mix(seed ^ mix(a + 0x9e3779b97f4a7c15ull));
        return Rng(mix(s ^ mix(b + 0xbf58476d1ce4e5b9ull)));
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t below(std::size_t n) {
        // rejection keeps the draw exactly uniform for every n
        const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return static_cast<std::size_t>(r % n);
        }
    }

    /// Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

    bool coin(double p_true) { return unit() < p_true; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Uniformly shuffled [0, n).
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        shuffle(p);
        return p;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

} // namespace lexsel
