#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmalg/bipoly.hpp"
#include "rmalg/rational.hpp"

namespace rmalg {

// Exact truncated moment data of an encoded distribution: moments M_1..M_K
// and Shannon-series coefficients nu_k = (-1)^{k+1} M_k / k.
struct MomentSeries {
    int K = 0;
    std::vector<Rational> moments;   // M_1..M_K
    std::vector<Rational> shannon;   // nu_1..nu_K
    Rational mean_check;             // independently propagated M_1

    std::string to_json() const;
};

// L_mz of a purely atomic distribution sum w_i * delta_{x_i}; weights must be
// positive and sum to 1 exactly, locations pairwise distinct.
BiPoly atomic_lmz(const std::vector<std::pair<Rational, Rational>>& atoms);

// Marchenko-Pastur encoding c*z*m^2 - (1-c-z)*m + 1, c > 0.
BiPoly mp_lmz(const Rational& c);

// AR(1)-covariance encoding, |alpha| < 1.
BiPoly ar1_lmz(const Rational& alpha);

// Stieltjes <-> moment-generating involution: substitute (m := -mu*z,
// z := 1/z) and clear denominators (and back). Mutually inverse on
// primitive parts.
BiPoly mz_to_muz(const BiPoly& p);
BiPoly muz_to_mz(const BiPoly& p);

// Deterministic maps: alpha*A (alpha > 0), A + beta*I, and the companion
// relation m~(z) = c*m(z) - (1-c)/z between the two Gram orientations.
BiPoly scale_lmz(const BiPoly& p, const Rational& alpha);
BiPoly shift_lmz(const BiPoly& p, const Rational& beta);
BiPoly companion_flip(const BiPoly& p, const Rational& c);

// All integer-power series branches mu(z) = 1 + sum M_k z^k of p(mu, z) = 0
// are considered; the branch is pinned by the externally propagated mean
// (exact M_1). Conjugate-branch products can agree through M_1; such a tie
// is resolved by the propagated second moment when supplied, and is a
// "degenerate expansion" error otherwise.
MomentSeries moment_series(const BiPoly& muz, int K, const Rational& expected_M1,
                           const std::optional<Rational>& expected_M2 = std::nullopt);

std::vector<Rational> shannon_coefficients(const MomentSeries& ms);

}  // namespace rmalg
