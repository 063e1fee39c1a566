#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmalg/rational.hpp"
#include "rmalg/upoly.hpp"

namespace rmalg {

// Variable pair carried by a bivariate polynomial. The first variable is the
// transform (m, mu, psi, chi, s), the second the argument (z or w).
enum class VarTag { MZ, MUZ, PSIZ, CHIW, SW };

const char* tag_name(VarTag t);
std::pair<const char*, const char*> tag_vars(VarTag t);
VarTag tag_from_name(std::string_view name);

// Dense bivariate polynomial over Q: coefficient (i, j) multiplies
// v1^i * v2^j. Always trimmed; the zero polynomial has deg1() == deg2() == -1.
class BiPoly {
public:
    BiPoly() : BiPoly(VarTag::MZ) {}
    explicit BiPoly(VarTag tag) : tag_(tag) {}
    BiPoly(VarTag tag, std::vector<std::vector<Rational>> rows);

    static BiPoly constant(VarTag tag, const Rational& v);
    static BiPoly monomial(VarTag tag, int i, int j, const Rational& v = Rational(1));
    static BiPoly from_rows(VarTag tag, const std::vector<UPoly>& rows);

    VarTag tag() const { return tag_; }
    BiPoly with_tag(VarTag t) const;

    bool is_zero() const { return d1_ < 0; }
    int deg1() const { return d1_; }
    int deg2() const { return d2_; }

    const Rational& at(int i, int j) const;  // 0 outside stored range
    void set(int i, int j, const Rational& v);

    UPoly row(int i) const;  // coefficient of v1^i as a polynomial in v2
    UPoly col(int j) const;  // coefficient of v2^j as a polynomial in v1
    std::vector<UPoly> rows() const;

    BiPoly operator-() const;
    friend BiPoly operator+(const BiPoly& a, const BiPoly& b);
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b);
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
    BiPoly operator*(const Rational& s) const;
    BiPoly pow(unsigned e) const;
    bool operator==(const BiPoly& o) const;

    BiPoly derivative1() const;
    BiPoly derivative2() const;
    // Swap the two variable roles (transpose the coefficient grid).
    BiPoly transposed(VarTag new_tag) const;

    Rational eval(const Rational& a, const Rational& b) const;

    // Canonical text form: "TAG; D1; D2; a00 a01 ... " row-major.
    std::string to_text() const;
    static BiPoly from_text(std::string_view text);

private:
    void trim();
    void check_cap() const;
    VarTag tag_;
    int d1_ = -1, d2_ = -1;
    std::vector<Rational> c_;  // (d1_+1) x (d2_+1), row-major
};

// Degree cap guarding runaway resultant/substitution growth (per variable).
// Operation results are checked against the configured cap; intermediate
// arithmetic inside resultant/gcd internals is allowed 8x headroom.
int degree_cap();
void set_degree_cap(int cap);
void enforce_degree_cap(const BiPoly& p, const char* context);

// Numeric content removal + sign canonicalization. The sign rule fixes the
// lowest-order v2 coefficient of the highest v1 row to be positive.
// Errors on the zero polynomial.
BiPoly normalize(const BiPoly& p);

// normalize() plus removal of polynomial content in both variable directions
// (guarded so a polynomial pure in one variable is left intact).
BiPoly canonical(const BiPoly& p);

// Clears denominators of p(n1/d1, n2/d2): returns canonical of
// d1^D1 * d2^D2 * p(n1/d1, n2/d2) in the target variable space.
BiPoly substitute_rational(const BiPoly& p, const BiPoly& n1, const BiPoly& d1,
                           const BiPoly& n2, const BiPoly& d2, VarTag out_tag);

// Horner evaluation with double-precision coefficients (scaled to avoid
// overflow for large integer coefficients).
std::complex<double> eval_complex(const BiPoly& p, std::complex<double> v1,
                                  std::complex<double> v2);

// Rows converted to double with a common power-of-two scaling; rows[i][j] is
// the coefficient of v1^i v2^j.
std::vector<std::vector<double>> double_rows(const BiPoly& p);

}  // namespace rmalg
