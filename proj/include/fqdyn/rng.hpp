#ifndef FQDYN_RNG_HPP
#define FQDYN_RNG_HPP

#include <cstdint>
#include <random>

namespace fqdyn {

// splitmix64 step; also used to mix several seed components into one stream seed.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t mix_seed(std::initializer_list<uint64_t> parts) {
    uint64_t s = 0x6a09e667f3bcc908ull;
    for (uint64_t v : parts) {
        s ^= v + 0x9e3779b97f4a7c15ull + (s << 6) + (s >> 2);
        (void)splitmix64(s);
    }
    return splitmix64(s);
}

inline std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64(seed); }

// Uniform in [0, n) without modulo bias worth caring about at our sizes.
inline uint64_t rng_below(std::mt19937_64& rng, uint64_t n) { return n ? rng() % n : 0; }

} // namespace fqdyn

#endif
