#ifndef SHADOWSIM_RNG_HPP
#define SHADOWSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace shadowsim {

// Counter-free splitmix64 generator with deterministic sub-stream
// derivation.  All distributions are implemented here rather than with
// <random> so that a (seed, replication) pair produces the same sample
// sequence on every platform and compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Derives an independent stream from a master seed and a path of
    // stream tags (replication index, role tag, cell key, ...).
    static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = scramble(master ^ 0x6a09e667f3bcc909ULL);
        for (std::uint64_t p : path)
            h = scramble(h ^ scramble(p + 0x9e3779b97f4a7c15ULL));
        return Rng(h);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return scramble(state_);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Exponential with mean 1; uses -log1p(-u) so u == 0 is safe.
    double exponential() { return -std::log1p(-uniform()); }

    unsigned long poisson(double mu);

private:
    static std::uint64_t scramble(std::uint64_t z) {
        z ^= z >> 30; z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27; z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

} // namespace shadowsim

#endif
