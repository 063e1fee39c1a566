#include "rmalg/channels.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rmalg/error.hpp"
#include "rmalg/polyops.hpp"

namespace rmalg {

namespace {

ExprPtr node(ChannelExpr e) { return std::make_shared<const ChannelExpr>(std::move(e)); }

void require_positive(const Rational& v, const char* what) {
    if (sgn(v) <= 0) fail(ErrorKind::Domain, std::string(what) + " must be positive");
}

}  // namespace

std::string ChannelExpr::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case ExprKind::Atoms: {
            os << "atoms(";
            for (size_t i = 0; i < atoms.size(); ++i) {
                if (i) os << ",";
                os << rmalg::to_string(atoms[i].first) << ":" << rmalg::to_string(atoms[i].second);
            }
            os << ")";
            break;
        }
        case ExprKind::MP: os << "mp(" << rmalg::to_string(c) << ")"; break;
        case ExprKind::AR1: os << "ar1(" << rmalg::to_string(alpha) << ")"; break;
        case ExprKind::Scale:
            os << "scale(" << a->to_string() << "," << rmalg::to_string(alpha) << ")";
            break;
        case ExprKind::Shift:
            os << "shift(" << a->to_string() << "," << rmalg::to_string(beta) << ")";
            break;
        case ExprKind::CorrWish:
            os << "corrWish(" << a->to_string() << "," << b->to_string() << ","
               << rmalg::to_string(c) << ")";
            break;
        case ExprKind::AgramWish:
            os << "agramWish(" << a->to_string() << "," << rmalg::to_string(c) << ","
               << rmalg::to_string(s) << ")";
            break;
        case ExprKind::FreeMultiply:
            os << "freeMultiply(" << a->to_string() << "," << b->to_string() << ")";
            break;
    }
    return os.str();
}

ExprPtr make_atoms(std::vector<std::pair<Rational, Rational>> atoms) {
    if (atoms.empty()) fail(ErrorKind::Domain, "atoms: empty list");
    Rational wsum(0);
    std::set<Rational> seen;
    for (const auto& [w, x] : atoms) {
        if (sgn(w) <= 0) fail(ErrorKind::Domain, "atoms: weights must be positive");
        if (sgn(x) < 0) fail(ErrorKind::Domain, "atoms: locations must be nonnegative");
        if (!seen.insert(x).second) fail(ErrorKind::Domain, "atoms: duplicate location");
        wsum += w;
    }
    if (wsum != 1) fail(ErrorKind::Domain, "atoms: weights sum to " + to_string(wsum));
    ChannelExpr e;
    e.kind = ExprKind::Atoms;
    e.atoms = std::move(atoms);
    return node(std::move(e));
}

ExprPtr make_mp(const Rational& c) {
    require_positive(c, "mp: aspect ratio");
    ChannelExpr e;
    e.kind = ExprKind::MP;
    e.c = c;
    return node(std::move(e));
}

ExprPtr make_ar1(const Rational& alpha) {
    if (abs(alpha) >= 1) fail(ErrorKind::Domain, "ar1: |alpha| must be < 1");
    ChannelExpr e;
    e.kind = ExprKind::AR1;
    e.alpha = alpha;
    return node(std::move(e));
}

ExprPtr make_scale(ExprPtr child, const Rational& alpha) {
    require_positive(alpha, "scale: factor");
    ChannelExpr e;
    e.kind = ExprKind::Scale;
    e.alpha = alpha;
    e.a = std::move(child);
    return node(std::move(e));
}

ExprPtr make_shift(ExprPtr child, const Rational& beta) {
    ChannelExpr e;
    e.kind = ExprKind::Shift;
    e.beta = beta;
    e.a = std::move(child);
    return node(std::move(e));
}

ExprPtr make_corr_wish(ExprPtr a, ExprPtr b, const Rational& c) {
    require_positive(c, "corrWish: aspect ratio");
    ChannelExpr e;
    e.kind = ExprKind::CorrWish;
    e.c = c;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

ExprPtr make_agram_wish(ExprPtr a, const Rational& c, const Rational& s) {
    require_positive(c, "agramWish: aspect ratio");
    require_positive(s, "agramWish: noise scale");
    ChannelExpr e;
    e.kind = ExprKind::AgramWish;
    e.c = c;
    e.s = s;
    e.a = std::move(a);
    return node(std::move(e));
}

ExprPtr make_free_multiply(ExprPtr a, ExprPtr b) {
    ChannelExpr e;
    e.kind = ExprKind::FreeMultiply;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

BiPoly wishart_lmz(const BiPoly& lmzB, const Rational& c) {
    if (lmzB.tag() != VarTag::MZ) fail(ErrorKind::Domain, "wishart_lmz: expected MZ polynomial");
    require_positive(c, "wishart_lmz: aspect ratio");
    const VarTag out = VarTag::MZ;
    // z_W(m) inverse relation: m_B evaluated at -1/(c m) equals
    // c m (1 - c - c z m); both maps are rational in (m, z).
    BiPoly n1(out);
    n1.set(1, 0, c * (Rational(1) - c));  // c(1-c) m
    n1.set(2, 1, -c * c);                 // -c^2 z m^2
    BiPoly d1 = BiPoly::constant(out, Rational(1));
    BiPoly n2 = BiPoly::constant(out, Rational(-1));
    BiPoly d2 = BiPoly::monomial(out, 1, 0, c);  // c m
    BiPoly w = substitute_rational(lmzB, n1, d1, n2, d2, out);
    BiPoly r = squarefree_in_first(w);
    enforce_degree_cap(r, "wishart_lmz");
    return r;
}

BiPoly agram_lmz(const BiPoly& lmzA, const Rational& c, const Rational& s) {
    if (lmzA.tag() != VarTag::MZ) fail(ErrorKind::Domain, "agram_lmz: expected MZ polynomial");
    require_positive(c, "agram_lmz: aspect ratio");
    if (sgn(s) < 0) fail(ErrorKind::Domain, "agram_lmz: noise scale must be nonnegative");
    if (s == 0) return canonical(lmzA);
    const Rational s2 = s * s;
    const VarTag out = VarTag::MZ;
    // m = (1 + s^2 c m) m_A(w), w = (1 + s^2 c m)(z (1 + s^2 c m) - s^2(1-c)).
    BiPoly u(out);  // 1 + s^2 c m
    u.set(0, 0, Rational(1));
    u.set(1, 0, s2 * c);
    BiPoly n1 = BiPoly::monomial(out, 1, 0, Rational(1));  // m
    BiPoly d1 = u;
    BiPoly zpart(out);  // z (1 + s^2 c m) - s^2 (1-c)
    zpart.set(0, 1, Rational(1));
    zpart.set(1, 1, s2 * c);
    zpart.set(0, 0, -s2 * (Rational(1) - c));
    BiPoly n2 = u * zpart;
    BiPoly d2 = BiPoly::constant(out, Rational(1));
    BiPoly w = substitute_rational(lmzA, n1, d1, n2, d2, out);
    BiPoly r = squarefree_in_first(w);
    enforce_degree_cap(r, "agram_lmz");
    return r;
}

namespace {

// MZ -> SW leg of the S-transform chain.
BiPoly lmz_to_lsw(const BiPoly& lmz) {
    BiPoly muz = mz_to_muz(lmz);
    // psi = mu - 1.
    BiPoly n1(VarTag::PSIZ);
    n1.set(0, 0, Rational(1));
    n1.set(1, 0, Rational(1));
    BiPoly one = BiPoly::constant(VarTag::PSIZ, Rational(1));
    BiPoly n2 = BiPoly::monomial(VarTag::PSIZ, 0, 1, Rational(1));
    BiPoly psiz = substitute_rational(muz, n1, one, n2, one, VarTag::PSIZ);
    // Functional inversion: swap the variable roles.
    BiPoly chiw = psiz.transposed(VarTag::CHIW);
    // chi = S w / (1 + w).
    BiPoly nS(VarTag::SW);
    nS.set(1, 1, Rational(1));  // S w
    BiPoly dS(VarTag::SW);
    dS.set(0, 0, Rational(1));
    dS.set(0, 1, Rational(1));  // 1 + w
    BiPoly nw = BiPoly::monomial(VarTag::SW, 0, 1, Rational(1));
    BiPoly onew = BiPoly::constant(VarTag::SW, Rational(1));
    return substitute_rational(chiw, nS, dS, nw, onew, VarTag::SW);
}

// SW -> MZ leg (chain inverted).
BiPoly lsw_to_lmz(const BiPoly& lsw) {
    // S = chi (1 + w) / w.
    BiPoly nChi(VarTag::CHIW);
    nChi.set(1, 0, Rational(1));
    nChi.set(1, 1, Rational(1));  // chi (1 + w)
    BiPoly dChi = BiPoly::monomial(VarTag::CHIW, 0, 1, Rational(1));  // w
    BiPoly nw = BiPoly::monomial(VarTag::CHIW, 0, 1, Rational(1));
    BiPoly onec = BiPoly::constant(VarTag::CHIW, Rational(1));
    BiPoly chiw = substitute_rational(lsw, nChi, dChi, nw, onec, VarTag::CHIW);
    BiPoly psiz = chiw.transposed(VarTag::PSIZ);
    // mu = psi + 1  <=>  psi = mu - 1.
    BiPoly n1(VarTag::MUZ);
    n1.set(0, 0, Rational(-1));
    n1.set(1, 0, Rational(1));
    BiPoly one = BiPoly::constant(VarTag::MUZ, Rational(1));
    BiPoly n2 = BiPoly::monomial(VarTag::MUZ, 0, 1, Rational(1));
    BiPoly muz = substitute_rational(psiz, n1, one, n2, one, VarTag::MUZ);
    return muz_to_mz(muz);
}

}  // namespace

BiPoly free_multiply(const BiPoly& lmzA, const BiPoly& lmzW) {
    if (lmzA.tag() != VarTag::MZ || lmzW.tag() != VarTag::MZ)
        fail(ErrorKind::Domain, "free_multiply: expected MZ polynomials");
    BiPoly swA = lmz_to_lsw(lmzA);
    BiPoly swB = lmz_to_lsw(lmzW);

    // Eliminate u from L_A(u, w) = 0 and u^degS * L_B(S/u, w) = 0; the product
    // curve S = S_A(w) S_B(w) lies in the vanishing set of the resultant.
    int dA = swA.deg1();
    int dB = swB.deg1();
    if (dA < 1 || dB < 1) fail(ErrorKind::Compile, "S-transform undefined");
    std::vector<BiPoly> P, Q;
    for (int i = 0; i <= dA; ++i)
        P.push_back(BiPoly::from_rows(VarTag::SW, {swA.row(i)}));  // pure in w
    // Q[u^k] with k = dB - i collects S^i * (coefficient row of S^i in swB).
    Q.assign(static_cast<size_t>(dB) + 1, BiPoly(VarTag::SW));
    for (int i = 0; i <= dB; ++i) {
        UPoly rowi = swB.row(i);
        BiPoly term(VarTag::SW);
        for (int j = 0; j <= rowi.deg(); ++j)
            if (rowi.coeff(j) != 0) term.set(i, j, rowi.coeff(j));
        Q[static_cast<size_t>(dB - i)] = term;
    }
    BiPoly res = resultant_elim(P, Q, VarTag::SW);
    if (res.is_zero()) fail(ErrorKind::Compile, "free_multiply: resultant vanished");
    res = canonical(res);
    enforce_degree_cap(res, "free_multiply (resultant)");
    res = squarefree_in_first(res);
    BiPoly out = lsw_to_lmz(res);
    out = squarefree_in_first(out);
    enforce_degree_cap(out, "free_multiply");
    return out;
}

BiPoly corr_wish(const BiPoly& lmzA, const BiPoly& lmzB, const Rational& c) {
    return free_multiply(lmzA, wishart_lmz(lmzB, c));
}

Rational mean_of(const ChannelExpr& e) {
    switch (e.kind) {
        case ExprKind::Atoms: {
            Rational m(0);
            for (const auto& [w, x] : e.atoms) m += w * x;
            return m;
        }
        case ExprKind::MP: return Rational(1);
        case ExprKind::AR1: return Rational(1);
        case ExprKind::Scale: return e.alpha * mean_of(*e.a);
        case ExprKind::Shift: return mean_of(*e.a) + e.beta;
        case ExprKind::CorrWish: return mean_of(*e.a) * mean_of(*e.b);
        case ExprKind::AgramWish: return mean_of(*e.a) + e.s * e.s;
        case ExprKind::FreeMultiply: return mean_of(*e.a) * mean_of(*e.b);
    }
    fail(ErrorKind::Domain, "mean_of: unknown node");
}

namespace {

// Free-product second moment for inputs with moments (a1, a2), (b1, b2).
Rational free_product_m2(const Rational& a1, const Rational& a2, const Rational& b1,
                         const Rational& b2) {
    return a2 * b1 * b1 + a1 * a1 * b2 - a1 * a1 * b1 * b1;
}

}  // namespace

Rational second_moment_of(const ChannelExpr& e) {
    switch (e.kind) {
        case ExprKind::Atoms: {
            Rational m(0);
            for (const auto& [w, x] : e.atoms) m += w * x * x;
            return m;
        }
        case ExprKind::MP: return Rational(1) + e.c;
        case ExprKind::AR1: return e.alpha;  // formal series of the encoding
        case ExprKind::Scale: return e.alpha * e.alpha * second_moment_of(*e.a);
        case ExprKind::Shift: {
            Rational m1 = mean_of(*e.a);
            return second_moment_of(*e.a) + Rational(2) * e.beta * m1 + e.beta * e.beta;
        }
        case ExprKind::CorrWish: {
            Rational a1 = mean_of(*e.a), a2 = second_moment_of(*e.a);
            Rational b1 = mean_of(*e.b), b2 = second_moment_of(*e.b);
            // Gram second-moment identity for the inner Wishart part.
            Rational x2 = b1 * b1 + e.c * b2;
            return free_product_m2(a1, a2, b1, x2);
        }
        case ExprKind::AgramWish: {
            Rational a1 = mean_of(*e.a), a2 = second_moment_of(*e.a);
            Rational s2 = e.s * e.s;
            Rational one_c = Rational(1) + e.c;
            return a2 + Rational(2) * a1 * s2 * one_c + s2 * s2 * one_c;
        }
        case ExprKind::FreeMultiply:
            return free_product_m2(mean_of(*e.a), second_moment_of(*e.a), mean_of(*e.b),
                                   second_moment_of(*e.b));
    }
    fail(ErrorKind::Domain, "second_moment_of: unknown node");
}

std::optional<Rational> zero_mass_of(const ChannelExpr& e) {
    auto gram_mass = [](const Rational& c, const std::optional<Rational>& input_zero)
        -> std::optional<Rational> {
        if (!input_zero) return std::nullopt;
        // Nonzero fraction min(1 - z_in_adjusted, 1/c ... ) for the Gram map;
        // with input zero mass zb the surviving fraction is min(1, (1-zb)/c).
        Rational nonzero = (Rational(1) - *input_zero) / c;
        if (nonzero > 1) nonzero = Rational(1);
        return Rational(1) - nonzero;
    };
    switch (e.kind) {
        case ExprKind::Atoms: {
            for (const auto& [w, x] : e.atoms)
                if (x == 0) return w;
            return Rational(0);
        }
        case ExprKind::MP: return gram_mass(e.c, Rational(0));
        case ExprKind::AR1: return Rational(0);
        case ExprKind::Scale: return zero_mass_of(*e.a);
        case ExprKind::Shift: {
            if (e.beta == 0) return zero_mass_of(*e.a);
            return std::nullopt;  // atoms move; no structural rule
        }
        case ExprKind::CorrWish: {
            auto za = zero_mass_of(*e.a);
            auto zg = gram_mass(e.c, zero_mass_of(*e.b));
            if (!za || !zg) return std::nullopt;
            return std::max(*za, *zg);
        }
        case ExprKind::AgramWish: {
            // R + sG has full rank a.s. for s > 0.
            Rational nonzero = Rational(1) / e.c;
            if (nonzero > 1) nonzero = Rational(1);
            return Rational(1) - nonzero;
        }
        case ExprKind::FreeMultiply: {
            auto za = zero_mass_of(*e.a);
            auto zb = zero_mass_of(*e.b);
            if (!za || !zb) return std::nullopt;
            return std::max(*za, *zb);
        }
    }
    return std::nullopt;
}

namespace {

BiPoly build_lmz(const ChannelExpr& e);

void collect_aspect(const ChannelExpr& e, std::optional<Rational>& c) {
    auto visit_c = [&](const Rational& v) {
        if (!c) c = v;
        else if (*c != v)
            fail(ErrorKind::Compile, "aspect-ratio mismatch: " + to_string(*c) + " vs " +
                                         to_string(v));
    };
    switch (e.kind) {
        case ExprKind::MP: visit_c(e.c); break;
        case ExprKind::CorrWish:
            visit_c(e.c);
            collect_aspect(*e.a, c);
            collect_aspect(*e.b, c);
            break;
        case ExprKind::AgramWish:
            visit_c(e.c);
            collect_aspect(*e.a, c);
            break;
        case ExprKind::Scale:
        case ExprKind::Shift: collect_aspect(*e.a, c); break;
        case ExprKind::FreeMultiply:
            collect_aspect(*e.a, c);
            collect_aspect(*e.b, c);
            break;
        case ExprKind::Atoms:
        case ExprKind::AR1: break;
    }
}

BiPoly build_lmz(const ChannelExpr& e) {
    switch (e.kind) {
        case ExprKind::Atoms: return atomic_lmz(e.atoms);
        case ExprKind::MP: return mp_lmz(e.c);
        case ExprKind::AR1: return ar1_lmz(e.alpha);
        case ExprKind::Scale: return scale_lmz(build_lmz(*e.a), e.alpha);
        case ExprKind::Shift: return shift_lmz(build_lmz(*e.a), e.beta);
        case ExprKind::CorrWish: {
            if (mean_of(*e.a) == 0 || mean_of(*e.b) == 0)
                fail(ErrorKind::Compile, "S-transform undefined: zero-mean input");
            return corr_wish(build_lmz(*e.a), build_lmz(*e.b), e.c);
        }
        case ExprKind::AgramWish: return agram_lmz(build_lmz(*e.a), e.c, e.s);
        case ExprKind::FreeMultiply: {
            if (mean_of(*e.a) == 0 || mean_of(*e.b) == 0)
                fail(ErrorKind::Compile, "S-transform undefined: zero-mean input");
            return free_multiply(build_lmz(*e.a), build_lmz(*e.b));
        }
    }
    fail(ErrorKind::Domain, "build_lmz: unknown node");
}

}  // namespace

CompiledChannel compile(const ExprPtr& expr) {
    if (!expr) fail(ErrorKind::Domain, "compile: null expression");
    CompiledChannel out;
    out.expr = expr;
    out.lmz = build_lmz(*expr);
    std::optional<Rational> c;
    collect_aspect(*expr, c);
    out.c = c.value_or(Rational(1));
    out.mean = mean_of(*expr);
    out.second_moment = second_moment_of(*expr);
    out.zero_mass = zero_mass_of(*expr);
    // The propagated-mean branch must exist.
    (void)moment_series(mz_to_muz(out.lmz), 1, out.mean, out.second_moment);
    return out;
}

}  // namespace rmalg
