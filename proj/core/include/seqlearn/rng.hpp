#pragma once

#include <cstdint>

#include "seqlearn/rational.hpp"

namespace seqlearn {

// splitmix64 finalizer; fixed constants, identical on every platform
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// k-th deviate of a seeded generator, as the exact rational u/2^64 in [0,1)
inline Rational deviate(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t v = mix64(seed * 0x9e3779b97f4a7c15ull + k);
    BigInt num;
    mpz_import(num.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    Rational q(num, pow2(64).get_num());
    q.canonicalize();
    return q;
}

// small deterministic integer draw in [lo, hi]
inline std::uint64_t draw_range(std::uint64_t seed, std::uint64_t k, std::uint64_t lo,
                                std::uint64_t hi) {
    return lo + mix64(seed * 0x9e3779b97f4a7c15ull + k) % (hi - lo + 1);
}

}  // namespace seqlearn
