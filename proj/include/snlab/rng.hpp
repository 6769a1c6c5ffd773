#pragma once

#include <cstdint>

// Counter-based splittable random streams: every draw is a pure hash of
// (seed, stream, counter), so results do not depend on call order or on
// how work is scheduled across threads.

namespace snlab {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// Stateless mix of (seed, stream, counter) into 64 bits.
inline std::uint64_t rng_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = detail::splitmix64(seed);
    h = detail::splitmix64(h ^ (stream + 0x632be59bd9b4e019ULL));
    h = detail::splitmix64(h ^ (counter + 0x9e3779b97f4a7c15ULL));
    return h;
}

/// Uniform double in [0,1) from the top 53 bits.
inline double rng_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(rng_hash(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Derive a child seed, e.g. one per sweep row or per orbit.
inline std::uint64_t rng_subseed(std::uint64_t seed, std::uint64_t index) {
    return rng_hash(seed, 0xa5a5a5a5a5a5a5a5ULL, index);
}

/// Sequential counter-based stream (thin convenience wrapper).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    double uniform() { return rng_uniform(seed_, stream_, counter_++); }
    std::uint64_t bits() { return rng_hash(seed_, stream_, counter_++); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

} // namespace snlab
