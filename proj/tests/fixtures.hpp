// Reference polynomial fixtures used by the unit and acceptance suites.
#pragma once

#include "rmalg/bipoly.hpp"

namespace rmalg::test_fixtures {

// Published quartic encoding for the correlated AR(1) Gram channel,
// instantiated at rational (alpha, c).
inline BiPoly reference_ar1_w(const Rational& a, const Rational& c) {
    BiPoly p(VarTag::MZ);
    p.set(4, 3, -c * c);
    p.set(3, 2, Rational(2) * c - Rational(4) * c * c);
    p.set(3, 3, Rational(-2) * a * c);
    p.set(2, 2, Rational(2) * a - Rational(6) * a * c);
    p.set(2, 3, Rational(-1));
    p.set(2, 1, Rational(-1) - Rational(5) * c * c + Rational(6) * c);
    p.set(1, 1, Rational(-6) * a * c + Rational(4) * a);
    p.set(1, 0, Rational(-2) - Rational(2) * c * c + Rational(4) * c);
    p.set(1, 2, Rational(-2));
    p.set(0, 0, Rational(-2) * a * c + Rational(2) * a);
    p.set(0, 1, Rational(-1));
    return canonical(p);
}

// Published 6x4 coefficient matrix for the two-atom doubly correlated Gram
// channel; entry (j, k) multiplies m^(j-1) z^(k-1).
inline BiPoly reference_two_atom_w(const Rational& c) {
    auto C = [&](long k) { return rat_pow(c, static_cast<unsigned long>(k)); };
    const Rational T[6][4] = {
        {Rational(-18) * c + Rational(18) * C(2), Rational(18) * c - 9, Rational(4), Rational(0)},
        {Rational(-108) * C(2) + Rational(36) * c + Rational(72) * C(3),
         Rational(-112) * c + Rational(18) + Rational(130) * C(2), Rational(-18) + Rational(54) * c,
         Rational(4)},
        {Rational(64) * C(2) + Rational(64) * C(4) - Rational(128) * C(3),
         Rational(72) * c - Rational(324) * C(2) + Rational(288) * C(3),
         Rational(224) * C(2) - Rational(112) * c, Rational(36) * c},
        {Rational(0), Rational(64) * C(2) - Rational(256) * C(3) + Rational(192) * C(4),
         Rational(360) * C(3) - Rational(216) * C(2), Rational(112) * C(2)},
        {Rational(0), Rational(0), Rational(192) * C(4) - Rational(128) * C(3),
         Rational(144) * C(3)},
        {Rational(0), Rational(0), Rational(0), Rational(64) * C(4)}};
    BiPoly p(VarTag::MZ);
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 4; ++k)
            if (T[j][k] != 0) p.set(j, k, T[j][k]);
    return canonical(p);
}

}  // namespace rmalg::test_fixtures
