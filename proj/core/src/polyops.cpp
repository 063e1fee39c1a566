#include "rmalg/polyops.hpp"

#include "rmalg/error.hpp"

namespace rmalg {

UPoly content_rows(const BiPoly& p) {
    UPoly g;
    for (int i = 0; i <= p.deg1(); ++i) {
        UPoly r = p.row(i);
        if (r.is_zero()) continue;
        g = gcd(g, r);
        if (g.deg() == 0) break;
    }
    return g;
}

UPoly content_cols(const BiPoly& p) {
    UPoly g;
    for (int j = 0; j <= p.deg2(); ++j) {
        UPoly c = p.col(j);
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.deg() == 0) break;
    }
    return g;
}

BiPoly divide_rows_exact(const BiPoly& p, const UPoly& u) {
    std::vector<UPoly> rows;
    for (int i = 0; i <= p.deg1(); ++i) {
        UPoly r = p.row(i);
        rows.push_back(r.is_zero() ? r : div_exact(r, u));
    }
    return BiPoly::from_rows(p.tag(), rows);
}

BiPoly divide_cols_exact(const BiPoly& p, const UPoly& u) {
    return divide_rows_exact(p.transposed(p.tag()), u).transposed(p.tag());
}

// A polynomial pure in one variable must keep that variable's factors: the
// guards skip content removal that would collapse the polynomial to a
// constant (e.g. mu - 1, the atom-at-zero encoding).
BiPoly remove_polynomial_content(const BiPoly& p) {
    BiPoly r = p;
    bool changed = true;
    while (changed) {
        changed = false;
        if (r.deg1() > 0) {
            UPoly c2 = content_rows(r);
            if (c2.deg() > 0) {
                r = divide_rows_exact(r, c2);
                changed = true;
            }
        }
        if (r.deg2() > 0) {
            UPoly c1 = content_cols(r);
            if (c1.deg() > 0) {
                r = divide_cols_exact(r, c1);
                changed = true;
            }
        }
    }
    return r;
}

BiPoly divide_exact(const BiPoly& p, const BiPoly& q) {
    if (q.is_zero()) fail(ErrorKind::Domain, "division by zero polynomial");
    if (p.is_zero()) return p;
    if (q.deg1() == 0) return divide_rows_exact(p, q.row(0));
    BiPoly r = p;
    std::vector<UPoly> quot_rows(static_cast<size_t>(std::max(p.deg1() - q.deg1(), -1)) + 1);
    UPoly qlc = q.row(q.deg1());
    while (!r.is_zero() && r.deg1() >= q.deg1()) {
        UPoly t = div_exact(r.row(r.deg1()), qlc);
        int k = r.deg1() - q.deg1();
        quot_rows[static_cast<size_t>(k)] = t;
        BiPoly tpoly = BiPoly::from_rows(p.tag(), {t});
        BiPoly shift = BiPoly::monomial(p.tag(), k, 0, Rational(1));
        r = r - shift * tpoly * q;
        if (!r.is_zero() && r.deg1() >= q.deg1() + k)
            fail(ErrorKind::Domain, "inexact bivariate division");
    }
    if (!r.is_zero()) fail(ErrorKind::Domain, "inexact bivariate division");
    return BiPoly::from_rows(p.tag(), quot_rows);
}

namespace {

// Pseudo-remainder prem(A, B) = lc(B)^(degA-degB+1) * A mod B in v1.
BiPoly prem_in_first(const BiPoly& A, const BiPoly& B) {
    UPoly blc = B.row(B.deg1());
    BiPoly blc_poly = BiPoly::from_rows(A.tag(), {blc});
    BiPoly r = A;
    int e = A.deg1() - B.deg1() + 1;
    while (!r.is_zero() && r.deg1() >= B.deg1()) {
        UPoly rlc = r.row(r.deg1());
        BiPoly rlc_poly = BiPoly::from_rows(A.tag(), {rlc});
        BiPoly shift = BiPoly::monomial(A.tag(), r.deg1() - B.deg1(), 0, Rational(1));
        r = blc_poly * r - shift * rlc_poly * B;
        --e;
    }
    if (e > 0) {
        BiPoly blc_pow = BiPoly::from_rows(A.tag(), {blc});
        for (int k = 1; k < e; ++k) blc_pow = blc_pow * blc_poly;
        r = blc_pow * r;
    }
    return r;
}

UPoly upoly_pow(const UPoly& u, int e) {
    UPoly r = UPoly::constant(Rational(1));
    for (int k = 0; k < e; ++k) r = r * u;
    return r;
}

}  // namespace

BiPoly gcd_in_first(const BiPoly& p, const BiPoly& q) {
    if (p.is_zero()) return q;
    if (q.is_zero()) return p;
    BiPoly A = remove_polynomial_content(p);
    BiPoly B = remove_polynomial_content(q);
    if (A.deg1() < B.deg1()) std::swap(A, B);
    if (B.deg1() == 0) return BiPoly::constant(p.tag(), Rational(1));
    // Subresultant PRS (Brown).
    UPoly g = UPoly::constant(Rational(1));
    UPoly h = UPoly::constant(Rational(1));
    while (true) {
        int delta = A.deg1() - B.deg1();
        BiPoly R = prem_in_first(A, B);
        if (R.is_zero()) {
            BiPoly out = remove_polynomial_content(B);
            return normalize(out);
        }
        if (R.deg1() == 0) return BiPoly::constant(p.tag(), Rational(1));
        UPoly divisor = g * upoly_pow(h, delta);
        R = divide_rows_exact(R, divisor);
        A = B;
        B = R;
        g = A.row(A.deg1());
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = div_exact(upoly_pow(g, delta), upoly_pow(h, delta - 1));
        }
    }
}

BiPoly squarefree_in_first(const BiPoly& p) {
    if (p.is_zero()) fail(ErrorKind::Domain, "degenerate polynomial");
    BiPoly pr = remove_polynomial_content(p);
    if (pr.deg1() < 1) return normalize(pr);
    BiPoly d = pr.derivative1();
    BiPoly g = gcd_in_first(pr, d);
    if (g.deg1() < 1) return normalize(pr);
    BiPoly out = divide_exact(pr, g);
    return canonical(out);
}

BiPoly resultant_elim(const std::vector<BiPoly>& P, const std::vector<BiPoly>& Q,
                      VarTag out_tag) {
    int n = static_cast<int>(P.size()) - 1;
    int m = static_cast<int>(Q.size()) - 1;
    while (n >= 0 && P[static_cast<size_t>(n)].is_zero()) --n;
    while (m >= 0 && Q[static_cast<size_t>(m)].is_zero()) --m;
    if (n < 1 || m < 1)
        fail(ErrorKind::Domain, "resultant requires positive degree in the eliminated variable");
    int dim = n + m;
    BiPoly zero(out_tag);
    std::vector<std::vector<BiPoly>> M(static_cast<size_t>(dim),
                                       std::vector<BiPoly>(static_cast<size_t>(dim), zero));
    // Sylvester layout: m rows of P coefficients, n rows of Q coefficients.
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) M[static_cast<size_t>(r)][static_cast<size_t>(r + n - k)] =
            P[static_cast<size_t>(k)].with_tag(out_tag);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) M[static_cast<size_t>(m + r)][static_cast<size_t>(r + m - k)] =
            Q[static_cast<size_t>(k)].with_tag(out_tag);

    // Fraction-free Bareiss elimination; exact divisions stay in Q[v1, v2].
    int sign = 1;
    BiPoly prev = BiPoly::constant(out_tag, Rational(1));
    for (int k = 0; k + 1 < dim; ++k) {
        if (M[static_cast<size_t>(k)][static_cast<size_t>(k)].is_zero()) {
            int swap_row = -1;
            for (int i = k + 1; i < dim; ++i)
                if (!M[static_cast<size_t>(i)][static_cast<size_t>(k)].is_zero()) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return zero;  // singular: resultant = 0
            std::swap(M[static_cast<size_t>(k)], M[static_cast<size_t>(swap_row)]);
            sign = -sign;
        }
        const BiPoly& pivot = M[static_cast<size_t>(k)][static_cast<size_t>(k)];
        for (int i = k + 1; i < dim; ++i) {
            for (int j = k + 1; j < dim; ++j) {
                BiPoly v = M[static_cast<size_t>(i)][static_cast<size_t>(j)] * pivot -
                           M[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                               M[static_cast<size_t>(k)][static_cast<size_t>(j)];
                M[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    v.is_zero() ? v : divide_exact(v, prev);
            }
            M[static_cast<size_t>(i)][static_cast<size_t>(k)] = zero;
        }
        prev = pivot;
    }
    BiPoly det = M[static_cast<size_t>(dim - 1)][static_cast<size_t>(dim - 1)];
    if (sign < 0) det = -det;
    return det;
}

BiPoly resultant_in_first(const BiPoly& p, const BiPoly& q) {
    if (p.is_zero() || q.is_zero()) fail(ErrorKind::Domain, "resultant of zero polynomial");
    if (p.deg1() < 1 || q.deg1() < 1)
        fail(ErrorKind::Domain, "resultant requires positive degree in the eliminated variable");
    std::vector<BiPoly> P, Q;
    for (int i = 0; i <= p.deg1(); ++i) P.push_back(BiPoly::from_rows(p.tag(), {p.row(i)}));
    for (int i = 0; i <= q.deg1(); ++i) Q.push_back(BiPoly::from_rows(q.tag(), {q.row(i)}));
    return resultant_elim(P, Q, p.tag());
}

UPoly discriminant_in_first(const BiPoly& p) {
    if (p.deg1() < 2) fail(ErrorKind::Domain, "no branch points");
    BiPoly res = resultant_in_first(p, p.derivative1());
    if (res.is_zero()) return UPoly();
    if (res.deg1() > 0) fail(ErrorKind::Domain, "discriminant not free of the first variable");
    return res.row(0);
}

}  // namespace rmalg
