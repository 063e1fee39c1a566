#include <doctest.h>

#include <vector>

#include "rmalg/error.hpp"
#include "rmalg/polyops.hpp"
#include "rmalg/transforms.hpp"

using namespace rmalg;

namespace {

std::vector<std::pair<Rational, Rational>> two_atom() {
    return {{rational(1, 2), Rational(1)}, {rational(1, 2), Rational(2)}};
}

MomentSeries extract(const BiPoly& lmz, int K, const Rational& mean) {
    return moment_series(mz_to_muz(lmz), K, mean);
}

// Legendre recurrence: independent oracle for the AR(1) encoding's formal
// series mu = 1 + z (1 - 2 a z + z^2)^(-1/2) = 1 + sum P_k(a) z^{k+1}.
Rational legendre(int k, const Rational& a) {
    Rational p0(1), p1 = a;
    if (k == 0) return p0;
    for (int n = 1; n < k; ++n) {
        Rational p2 = (Rational(2 * n + 1) * a * p1 - Rational(n) * p0) / Rational(n + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace

TEST_CASE("atomic_lmz matches reference encodings") {
    BiPoly p = atomic_lmz(two_atom());
    BiPoly expect(VarTag::MZ);  // (2z^2 - 6z + 4) m + 2z - 3
    expect.set(1, 2, Rational(2));
    expect.set(1, 1, Rational(-6));
    expect.set(1, 0, Rational(4));
    expect.set(0, 1, Rational(2));
    expect.set(0, 0, Rational(-3));
    CHECK(p == canonical(expect));

    BiPoly ident = atomic_lmz({{Rational(1), Rational(1)}});
    BiPoly expect_id(VarTag::MZ);  // m(1-z) - 1
    expect_id.set(1, 0, Rational(1));
    expect_id.set(1, 1, Rational(-1));
    expect_id.set(0, 0, Rational(-1));
    CHECK(ident == canonical(expect_id));

    BiPoly zero_atom = atomic_lmz({{Rational(1), Rational(0)}});
    BiPoly expect_zero(VarTag::MZ);  // z m + 1
    expect_zero.set(1, 1, Rational(1));
    expect_zero.set(0, 0, Rational(1));
    CHECK(zero_atom == canonical(expect_zero));

    CHECK_THROWS_AS(atomic_lmz({{rational(1, 2), Rational(1)}, {rational(1, 3), Rational(2)}}),
                    Error);
    CHECK_THROWS_AS(atomic_lmz({{rational(1, 2), Rational(1)}, {rational(1, 2), Rational(1)}}),
                    Error);
}

TEST_CASE("mp_lmz moments reproduce the quartic truncation") {
    for (const Rational& c : {rational(1, 4), rational(1, 2), Rational(1), rational(25, 13)}) {
        MomentSeries ms = extract(mp_lmz(c), 4, Rational(1));
        CHECK(ms.moments[0] == 1);
        CHECK(ms.moments[1] == Rational(1) + c);
        CHECK(ms.moments[2] == Rational(1) + 3 * c + c * c);
        CHECK(ms.moments[3] == Rational(1) + 6 * c + 6 * c * c + c * c * c);
    }
    CHECK_THROWS_AS(mp_lmz(Rational(0)), Error);
    CHECK_THROWS_AS(mp_lmz(Rational(-1)), Error);
}

TEST_CASE("ar1_lmz is the reference polynomial with Legendre formal series") {
    BiPoly p = ar1_lmz(rational(1, 2));
    BiPoly expect(VarTag::MZ);
    expect.set(2, 3, Rational(1));
    expect.set(2, 2, Rational(-1));
    expect.set(2, 1, Rational(1));
    expect.set(1, 2, Rational(2));
    expect.set(1, 1, Rational(-2));
    expect.set(1, 0, Rational(2));
    expect.set(0, 1, Rational(1));
    expect.set(0, 0, Rational(-1));
    CHECK(p == canonical(expect));

    for (const Rational& a : {Rational(0), rational(1, 2), rational(-1, 3)}) {
        MomentSeries ms = extract(ar1_lmz(a), 5, Rational(1));
        for (int k = 1; k <= 5; ++k)
            CHECK(ms.moments[static_cast<size_t>(k - 1)] == legendre(k - 1, a));
    }
    CHECK_THROWS_AS(ar1_lmz(Rational(1)), Error);
    CHECK_THROWS_AS(ar1_lmz(Rational(-2)), Error);
}

TEST_CASE("mz<->muz is an involution on primitive parts") {
    std::vector<BiPoly> fixtures = {
        atomic_lmz({{Rational(1), Rational(1)}}),
        atomic_lmz({{Rational(1), Rational(0)}}),
        atomic_lmz(two_atom()),
        mp_lmz(rational(1, 4)),
        mp_lmz(rational(25, 13)),
        ar1_lmz(rational(1, 2)),
        scale_lmz(mp_lmz(Rational(1)), rational(3, 2)),
        shift_lmz(atomic_lmz(two_atom()), rational(-1, 2)),
    };
    for (const BiPoly& p : fixtures) {
        BiPoly back = muz_to_mz(mz_to_muz(p));
        CHECK(back == canonical(p));
    }
}

TEST_CASE("scale/shift/companion maps") {
    // Atom relocation.
    CHECK(scale_lmz(atomic_lmz({{Rational(1), Rational(1)}}), Rational(2)) ==
          atomic_lmz({{Rational(1), Rational(2)}}));
    BiPoly p = mp_lmz(rational(1, 2));
    CHECK(scale_lmz(p, Rational(1)) == canonical(p));

    MomentSeries scaled = extract(scale_lmz(mp_lmz(Rational(1)), Rational(3)), 2, Rational(3));
    CHECK(scaled.moments[0] == 3);
    CHECK(scaled.moments[1] == 18);

    CHECK(shift_lmz(atomic_lmz({{Rational(1), Rational(0)}}), Rational(1)) ==
          atomic_lmz({{Rational(1), Rational(1)}}));
    CHECK(shift_lmz(shift_lmz(p, rational(2, 3)), rational(-2, 3)) == canonical(p));
    MomentSeries shifted = extract(shift_lmz(mp_lmz(Rational(1)), Rational(2)), 1, Rational(3));
    CHECK(shifted.moments[0] == 3);

    // Square case: the companion relation is the identity.
    CHECK(companion_flip(mp_lmz(Rational(1)), Rational(1)) == mp_lmz(Rational(1)));
    // Moments scale by c under zero-padding.
    Rational c = rational(1, 4);
    MomentSeries base = extract(mp_lmz(c), 3, Rational(1));
    MomentSeries flipped = extract(companion_flip(mp_lmz(c), c), 3, c);
    for (int k = 0; k < 3; ++k)
        CHECK(flipped.moments[static_cast<size_t>(k)] == c * base.moments[static_cast<size_t>(k)]);
    // Applying the inverse aspect ratio recovers the encoding.
    CHECK(companion_flip(companion_flip(mp_lmz(c), c), Rational(1) / c) == mp_lmz(c));

    CHECK_THROWS_AS(scale_lmz(p, Rational(0)), Error);
    CHECK_THROWS_AS(companion_flip(p, Rational(0)), Error);
}

TEST_CASE("moment_series pins the branch by the propagated mean") {
    // Identity channel: all moments are 1.
    MomentSeries ident = extract(atomic_lmz({{Rational(1), Rational(1)}}), 6, Rational(1));
    for (const Rational& m : ident.moments) CHECK(m == 1);

    // Atom at zero: the constant branch mu = 1.
    MomentSeries zero = extract(atomic_lmz({{Rational(1), Rational(0)}}), 4, Rational(0));
    for (const Rational& m : zero.moments) CHECK(m == 0);

    // Two atoms: moments sum w x^k.
    MomentSeries ta = extract(atomic_lmz(two_atom()), 4, rational(3, 2));
    CHECK(ta.moments[1] == rational(5, 2));
    CHECK(ta.moments[2] == rational(9, 2));
    CHECK(ta.moments[3] == rational(17, 2));

    CHECK(ta.mean_check == ta.moments[0]);

    // Wrong expected mean is a hard error.
    CHECK_THROWS_AS(extract(mp_lmz(Rational(1)), 3, Rational(2)), Error);
    CHECK_THROWS_AS(moment_series(mz_to_muz(mp_lmz(Rational(1))), 0, Rational(1)), Error);
}

TEST_CASE("shannon coefficients") {
    MomentSeries mp = extract(mp_lmz(rational(1, 4)), 3, Rational(1));
    auto nu = shannon_coefficients(mp);
    CHECK(nu[0] == 1);
    CHECK(nu[1] == rational(-5, 8));
    CHECK(nu[2] == rational(29, 48));

    MomentSeries ident = extract(atomic_lmz({{Rational(1), Rational(1)}}), 3, Rational(1));
    auto nu_id = shannon_coefficients(ident);
    CHECK(nu_id[0] == 1);
    CHECK(nu_id[1] == rational(-1, 2));
    CHECK(nu_id[2] == rational(1, 3));
}

TEST_CASE("sign alternation on nonnegative-support fixtures") {
    std::vector<std::pair<BiPoly, Rational>> fixtures = {
        {atomic_lmz(two_atom()), rational(3, 2)},
        {mp_lmz(rational(1, 4)), Rational(1)},
        {mp_lmz(rational(25, 13)), Rational(1)},
        {scale_lmz(mp_lmz(Rational(1)), rational(3, 2)), rational(3, 2)},
    };
    for (const auto& [p, mean] : fixtures) {
        MomentSeries ms = extract(p, 6, mean);
        for (int k = 1; k <= 6; ++k) {
            int expected_sign = (k % 2 == 1) ? 1 : -1;
            CHECK(sgn(ms.shannon[static_cast<size_t>(k - 1)]) == expected_sign);
        }
    }
}

TEST_CASE("moment series JSON shape") {
    MomentSeries ms = extract(atomic_lmz(two_atom()), 2, rational(3, 2));
    CHECK(ms.to_json() ==
          "{\"K\":2,\"M\":[\"3/2\",\"5/2\"],\"nu\":[\"3/2\",\"-5/4\"],\"mean\":\"3/2\"}");
}
