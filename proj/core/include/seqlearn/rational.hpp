#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace seqlearn {

// All bookkeeping is exact: Rational is a GMP rational, always canonical.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// 2^k for k possibly negative
Rational pow2(long k);

// 10^-m
Rational pow10_neg(unsigned m);

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// "num/den" (den omitted when 1)
std::string rat_str(const Rational& q);

// fixed-point decimal, truncated toward zero, exactly `places` digits
std::string rat_decimal(const Rational& q, unsigned places = 12);

// accepts "num/den", plain integers, and nothing else
Rational parse_rational(std::string_view text);

}  // namespace seqlearn
