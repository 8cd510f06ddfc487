#pragma once

#include <cstdint>

namespace bsdelab {

/// splitmix64: tiny counter-friendly generator.  Per-path streams are derived
/// from (master seed, path index) so path i is identical regardless of how
/// work is split across workers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return (next() >> 11) * 0x1.0p-53; }

    bool coin() { return (next() & 1u) != 0; }

    static SplitMix64 stream(std::uint64_t master, std::uint64_t index) {
        SplitMix64 mix(master);
        std::uint64_t a = mix.next();
        SplitMix64 ix(index + 0x632be59bd9b4e019ULL);
        return SplitMix64(a ^ ix.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace bsdelab
