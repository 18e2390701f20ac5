#pragma once

#include <cstdint>

namespace bohrlab {

// splitmix64: tiny, fully deterministic across platforms (std:: distributions
// are implementation-defined, which would break byte-identical reruns).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53 significant bits
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    // derive an independent substream (hash of seed and stream id)
    SplitMix64 fork(std::uint64_t stream) {
        SplitMix64 mix(state_ ^ (0xa0761d6478bd642fULL * (stream + 1)));
        mix.next();
        return mix;
    }

private:
    std::uint64_t state_;
};

} // namespace bohrlab
