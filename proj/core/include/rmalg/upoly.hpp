#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rmalg/rational.hpp"

namespace rmalg {

// Dense univariate polynomial over Q, coefficients in ascending order,
// always trimmed (no trailing zeros). The zero polynomial has deg() == -1.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UPoly constant(const Rational& v);
    static UPoly monomial(int k, const Rational& v);

    int deg() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Rational& coeff(int k) const;  // 0 outside stored range
    void set_coeff(int k, const Rational& v);
    const Rational& lc() const;  // leading coefficient; zero poly -> 0
    const std::vector<Rational>& coeffs() const { return c_; }

    UPoly operator-() const;
    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    UPoly operator*(const Rational& s) const;
    bool operator==(const UPoly& o) const { return c_ == o.c_; }

    UPoly derivative() const;
    Rational eval(const Rational& x) const;
    std::complex<double> eval(std::complex<double> x) const;

    std::string str(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Rational> c_;
};

// Field division: a = q*b + r with deg r < deg b.
std::pair<UPoly, UPoly> divrem(const UPoly& a, const UPoly& b);
// Exact division; throws on nonzero remainder.
UPoly div_exact(const UPoly& a, const UPoly& b);
// Monic gcd (1 for coprime inputs, 0 only if both inputs are 0).
UPoly gcd(const UPoly& a, const UPoly& b);
UPoly squarefree_part(const UPoly& a);

// Numeric content (positive rational) and sign-free primitive part.
Rational numeric_content(const UPoly& a);
UPoly primitive_part(const UPoly& a);

// Exact isolating intervals for the real roots of the squarefree part:
// either an exact root (lo == hi) or an open interval holding exactly one
// simple root with a sign change.
struct RootInterval {
    Rational lo, hi;
    bool exact = false;
};
std::vector<RootInterval> isolate_real_roots(const UPoly& a);

// All real roots of a polynomial (multiplicity collapsed), isolated with a
// Sturm chain on the squarefree part and refined by bisection until the
// enclosing interval is narrower than `width`. Exact arithmetic throughout;
// results converted to double at the end.
std::vector<double> real_roots(const UPoly& a, double width = 1e-12);

// The rational roots of a (no multiplicity), recovered from the isolating
// intervals by continued-fraction reconstruction. Irrational roots are
// skipped; rational roots of height up to ~2^512 are always found.
std::vector<Rational> rational_roots(const UPoly& a);

// Simplest rational (smallest denominator, then smallest numerator) in the
// closed interval [lo, hi].
Rational simplest_in_interval(const Rational& lo, const Rational& hi);

}  // namespace rmalg
