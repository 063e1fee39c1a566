#pragma once

#include <vector>

#include "rmalg/bipoly.hpp"

namespace rmalg {

// Content of p viewed in (Q[v2])[v1]: the gcd of the v1-coefficient rows.
UPoly content_rows(const BiPoly& p);
// Content of p viewed in (Q[v1])[v2]: the gcd of the v2-coefficient columns.
UPoly content_cols(const BiPoly& p);

BiPoly divide_rows_exact(const BiPoly& p, const UPoly& u);
BiPoly divide_cols_exact(const BiPoly& p, const UPoly& u);

// Strips polynomial content in both variable directions, guarded so a
// polynomial pure in one variable keeps that variable's factors.
BiPoly remove_polynomial_content(const BiPoly& p);

// Exact bivariate division; throws on nonzero remainder (internal misuse).
BiPoly divide_exact(const BiPoly& p, const BiPoly& q);

// Primitive gcd of p and q as polynomials in v1 over Q(v2)
// (subresultant PRS). Returns a constant 1 when coprime.
BiPoly gcd_in_first(const BiPoly& p, const BiPoly& q);

// p divided by gcd(p, dp/dv1); same zero set with multiplicities removed.
BiPoly squarefree_in_first(const BiPoly& p);

// Sylvester determinant eliminating v1; the raw (non-normalized) result is a
// BiPoly of v1-degree 0. Fraction-free Bareiss elimination over Q[v1,v2].
BiPoly resultant_in_first(const BiPoly& p, const BiPoly& q);

// Resultant of two polynomials in an auxiliary variable u whose coefficients
// live in the (v1, v2) space of `out_tag`. P[k], Q[k] are the u^k
// coefficients. Used where the eliminated variable is not one of the two
// output variables.
BiPoly resultant_elim(const std::vector<BiPoly>& P, const std::vector<BiPoly>& Q,
                      VarTag out_tag);

// Res_{v1}(p, dp/dv1) as a univariate polynomial in v2 (raw, up to the
// normalization inherent in Bareiss). Errors when deg1(p) < 2.
UPoly discriminant_in_first(const BiPoly& p);

}  // namespace rmalg
