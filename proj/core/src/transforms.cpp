#include "rmalg/transforms.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rmalg/error.hpp"
#include "rmalg/polyops.hpp"
#include "rmalg/series.hpp"

namespace rmalg {

namespace {

void require_tag(const BiPoly& p, VarTag t, const char* op) {
    if (p.tag() != t)
        fail(ErrorKind::Domain, std::string(op) + ": expected " + tag_name(t) + " polynomial, got " +
                                    tag_name(p.tag()));
}

}  // namespace

std::string MomentSeries::to_json() const {
    std::ostringstream os;
    os << "{\"K\":" << K << ",\"M\":[";
    for (int k = 0; k < K; ++k) os << (k ? "," : "") << '"' << to_string(moments[static_cast<size_t>(k)]) << '"';
    os << "],\"nu\":[";
    for (int k = 0; k < K; ++k) os << (k ? "," : "") << '"' << to_string(shannon[static_cast<size_t>(k)]) << '"';
    os << "],\"mean\":\"" << to_string(mean_check) << "\"}";
    return os.str();
}

BiPoly atomic_lmz(const std::vector<std::pair<Rational, Rational>>& atoms) {
    if (atoms.empty()) fail(ErrorKind::Domain, "atomic_lmz: empty atom list");
    Rational wsum(0);
    std::set<Rational> seen;
    for (const auto& [w, x] : atoms) {
        if (sgn(w) <= 0) fail(ErrorKind::Domain, "atomic_lmz: weights must be positive");
        if (!seen.insert(x).second)
            fail(ErrorKind::Domain, "atomic_lmz: duplicate location " + to_string(x));
        wsum += w;
    }
    if (wsum != 1)
        fail(ErrorKind::Domain, "atomic_lmz: weights sum to " + to_string(wsum) + ", expected 1");
    // m(z) = sum w_i / (x_i - z); clear the product of denominators.
    const VarTag tag = VarTag::MZ;
    BiPoly prod = BiPoly::constant(tag, Rational(1));
    std::vector<BiPoly> lin;
    for (const auto& [w, x] : atoms) {
        // (x_i - z): coefficient (0,0) = x_i, (0,1) = -1.
        BiPoly l(tag, {{x, Rational(-1)}});
        lin.push_back(l);
        prod = prod * l;
    }
    BiPoly rhs(tag);
    for (size_t i = 0; i < atoms.size(); ++i) {
        BiPoly partial = BiPoly::constant(tag, atoms[i].first);
        for (size_t j = 0; j < atoms.size(); ++j)
            if (j != i) partial = partial * lin[j];
        rhs = rhs + partial;
    }
    BiPoly m = BiPoly::monomial(tag, 1, 0, Rational(1));
    return canonical(m * prod - rhs);
}

BiPoly mp_lmz(const Rational& c) {
    if (sgn(c) <= 0) fail(ErrorKind::Domain, "mp_lmz: aspect ratio must be positive");
    const VarTag tag = VarTag::MZ;
    BiPoly p(tag);
    p.set(2, 1, c);                      // c z m^2
    p.set(1, 0, -(Rational(1) - c));     // -(1-c) m
    p.set(1, 1, Rational(1));            // + z m
    p.set(0, 0, Rational(1));            // + 1
    return canonical(p);
}

BiPoly ar1_lmz(const Rational& alpha) {
    if (abs(alpha) >= 1) fail(ErrorKind::Domain, "ar1_lmz: |alpha| must be < 1");
    const VarTag tag = VarTag::MZ;
    BiPoly p(tag);
    // (z^3 - 2 a z^2 + z) m^2 + (2 z^2 - 4 a z + 2) m + z - 2 a
    p.set(2, 3, Rational(1));
    p.set(2, 2, Rational(-2) * alpha);
    p.set(2, 1, Rational(1));
    p.set(1, 2, Rational(2));
    p.set(1, 1, Rational(-4) * alpha);
    p.set(1, 0, Rational(2));
    p.set(0, 1, Rational(1));
    p.set(0, 0, Rational(-2) * alpha);
    return canonical(p);
}

BiPoly mz_to_muz(const BiPoly& p) {
    require_tag(p, VarTag::MZ, "mz_to_muz");
    const VarTag out = VarTag::MUZ;
    // m := -mu z, z := 1/z.
    BiPoly n1(out);
    n1.set(1, 1, Rational(-1));
    BiPoly d1 = BiPoly::constant(out, Rational(1));
    BiPoly n2 = BiPoly::constant(out, Rational(1));
    BiPoly d2 = BiPoly::monomial(out, 0, 1, Rational(1));
    return substitute_rational(p, n1, d1, n2, d2, out);
}

BiPoly muz_to_mz(const BiPoly& p) {
    require_tag(p, VarTag::MUZ, "muz_to_mz");
    const VarTag out = VarTag::MZ;
    BiPoly n1(out);
    n1.set(1, 1, Rational(-1));
    BiPoly d1 = BiPoly::constant(out, Rational(1));
    BiPoly n2 = BiPoly::constant(out, Rational(1));
    BiPoly d2 = BiPoly::monomial(out, 0, 1, Rational(1));
    return substitute_rational(p, n1, d1, n2, d2, out);
}

BiPoly scale_lmz(const BiPoly& p, const Rational& alpha) {
    require_tag(p, VarTag::MZ, "scale_lmz");
    if (sgn(alpha) <= 0) fail(ErrorKind::Domain, "scale_lmz: alpha must be positive");
    const VarTag out = VarTag::MZ;
    // m := alpha m, z := z / alpha.
    BiPoly n1 = BiPoly::monomial(out, 1, 0, alpha);
    BiPoly d1 = BiPoly::constant(out, Rational(1));
    BiPoly n2 = BiPoly::monomial(out, 0, 1, Rational(1));
    BiPoly d2 = BiPoly::constant(out, alpha);
    return substitute_rational(p, n1, d1, n2, d2, out);
}

BiPoly shift_lmz(const BiPoly& p, const Rational& beta) {
    require_tag(p, VarTag::MZ, "shift_lmz");
    if (beta == 0) return canonical(p);
    const VarTag out = VarTag::MZ;
    BiPoly n1 = BiPoly::monomial(out, 1, 0, Rational(1));
    BiPoly d1 = BiPoly::constant(out, Rational(1));
    BiPoly n2(out);
    n2.set(0, 1, Rational(1));
    n2.set(0, 0, -beta);
    BiPoly d2 = BiPoly::constant(out, Rational(1));
    return substitute_rational(p, n1, d1, n2, d2, out);
}

BiPoly companion_flip(const BiPoly& p, const Rational& c) {
    require_tag(p, VarTag::MZ, "companion_flip");
    if (sgn(c) <= 0) fail(ErrorKind::Domain, "companion_flip: aspect ratio must be positive");
    const VarTag out = VarTag::MZ;
    // m := (z m + (1-c)) / (c z).
    BiPoly n1(out);
    n1.set(1, 1, Rational(1));
    n1.set(0, 0, Rational(1) - c);
    BiPoly d1 = BiPoly::monomial(out, 0, 1, c);
    BiPoly n2 = BiPoly::monomial(out, 0, 1, Rational(1));
    BiPoly d2 = BiPoly::constant(out, Rational(1));
    return substitute_rational(p, n1, d1, n2, d2, out);
}

// Branch selection walks the integer-slope Newton tree: level 0 is pinned to
// mu(0) = 1, level 1 to the propagated mean, level 2 (when products of
// conjugate input branches still agree) to the propagated second moment.
// Any deeper tie has no propagated anchor left and is an error.
MomentSeries moment_series(const BiPoly& muz, int K, const Rational& expected_M1,
                           const std::optional<Rational>& expected_M2) {
    require_tag(muz, VarTag::MUZ, "moment_series");
    if (K < 1) fail(ErrorKind::Domain, "moment_series: K must be >= 1");
    BiPoly r = squarefree_in_first(canonical(muz));

    if (r.eval(Rational(1), Rational(0)) != 0)
        fail(ErrorKind::Compile, "not a compactly-encoded distribution");

    std::vector<Rational> mu_coeffs;  // mu_coeffs[j] = coefficient of z^j
    int level = 0;
    while (true) {
        Rational head;
        if (level == 0) {
            head = Rational(1);
        } else if (level == 1) {
            head = expected_M1;
            if (r.eval(head, Rational(0)) != 0)
                fail(ErrorKind::Compile, "branch ambiguity: no series branch with mean " +
                                             to_string(expected_M1));
        } else if (level == 2 && expected_M2) {
            head = *expected_M2;
            if (r.eval(head, Rational(0)) != 0)
                fail(ErrorKind::Compile,
                     "branch ambiguity: no series branch with second moment " +
                         to_string(*expected_M2));
        } else {
            fail(ErrorKind::Compile, "degenerate expansion");
        }

        if (r.derivative1().eval(head, Rational(0)) != 0) {
            // Simple root: Newton lifting finishes the branch.
            QSeries tail = newton_lift(r, head, K - level);
            for (int k = 0; level + k <= K; ++k) mu_coeffs.push_back(tail[k]);
            break;
        }
        mu_coeffs.push_back(head);
        if (level == K) break;  // enough coefficients even if still tied
        // Shift y := head + z * y' and strip the z-power content.
        const VarTag vt = r.tag();
        BiPoly n1(vt);
        n1.set(0, 0, head);
        n1.set(1, 1, Rational(1));
        BiPoly one = BiPoly::constant(vt, Rational(1));
        BiPoly n2 = BiPoly::monomial(vt, 0, 1, Rational(1));
        r = squarefree_in_first(substitute_rational(r, n1, one, n2, one, vt));
        ++level;
    }

    if (mu_coeffs[1] != expected_M1)
        fail(ErrorKind::Compile, "branch ambiguity: extracted M_1 = " + to_string(mu_coeffs[1]) +
                                     " does not match propagated mean " + to_string(expected_M1));

    MomentSeries ms;
    ms.K = K;
    ms.mean_check = expected_M1;
    for (int k = 1; k <= K; ++k) {
        ms.moments.push_back(mu_coeffs[static_cast<size_t>(k)]);
        Rational nu = ms.moments.back() / Rational(k);
        if (k % 2 == 0) nu = -nu;
        ms.shannon.push_back(nu);
    }
    return ms;
}

std::vector<Rational> shannon_coefficients(const MomentSeries& ms) { return ms.shannon; }

}  // namespace rmalg
