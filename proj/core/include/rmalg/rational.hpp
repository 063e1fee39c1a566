#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "rmalg/error.hpp"

namespace rmalg {

// Exact rational scalar. mpq_class keeps results canonical (denominator > 0,
// gcd(|num|, den) = 1) as long as operands are canonical, so explicit
// canonicalize() calls are needed only at construction from raw parts.
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    if (den == 0) fail(ErrorKind::Domain, "rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p" or "p/q" with optional sign; q must be positive.
Rational rational_from_string(std::string_view text);

// Renders "p" when the denominator is 1, else "p/q".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

Rational rat_pow(const Rational& base, unsigned long exp);

inline int rat_sign(const Rational& r) { return sgn(r); }

inline Rational rat_abs(const Rational& r) { return abs(r); }

}  // namespace rmalg
