#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace edt {

/* splitmix64: tiny, portable, and good enough to derive independent
 * substreams by key mixing.  Used everywhere so results are bit-stable
 * across platforms (std:: distributions are implementation-defined). */
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

    int binomial(int n, double p) {
        int k = 0;
        for (int i = 0; i < n; ++i) k += (uniform() < p);
        return k;
    }

    // in-place Fisher-Yates shuffle
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
};

/* Key mixing for deterministic derived streams (per pair, per resample...). */
inline std::uint64_t mix_keys(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    SplitMix64 g(seed ^ (a * 0x9e3779b97f4a7c15ull) ^ (b * 0xc2b2ae3d27d4eb4full));
    g.next();
    return g.next();
}

}  // namespace edt
