#pragma once

#include <cstdint>
#include <random>

namespace bdelab {

// SplitMix64 finalizer, used to decorrelate seeds before they reach the engine.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic random stream. Every consumer in the library draws from one of
// these; reproducibility claims rest on the derivation rules below:
//   - a run with index r under master seed s uses seed splitmix64(s ^ splitmix64(r + 1))
//   - spawn() seeds a child stream from the next value of the parent
// All draws reduce to next_u64(); uniform01 uses the top 53 bits.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static RandomStream for_run(std::uint64_t master_seed, std::uint64_t run_index) {
        return RandomStream(master_seed ^ splitmix64(run_index + 1));
    }

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Unbiased integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t index_below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    RandomStream spawn() { return RandomStream(next_u64()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace bdelab
