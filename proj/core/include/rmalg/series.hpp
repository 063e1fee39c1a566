#pragma once

#include <vector>

#include "rmalg/bipoly.hpp"
#include "rmalg/rational.hpp"

namespace rmalg {

// Truncated formal power series over Q: c[0] + c[1] z + ... + c[prec] z^prec.
class QSeries {
public:
    explicit QSeries(int prec) : c_(static_cast<size_t>(prec) + 1) {}
    static QSeries constant(int prec, const Rational& v);

    int prec() const { return static_cast<int>(c_.size()) - 1; }
    const Rational& operator[](int k) const { return c_[static_cast<size_t>(k)]; }
    Rational& operator[](int k) { return c_[static_cast<size_t>(k)]; }

    QSeries truncated(int prec) const;
    bool is_zero() const;

    friend QSeries operator+(const QSeries& a, const QSeries& b);
    friend QSeries operator-(const QSeries& a, const QSeries& b);
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    // Division by a unit series (b[0] != 0).
    friend QSeries operator/(const QSeries& a, const QSeries& b);

private:
    std::vector<Rational> c_;
};

// p(x(z), z) truncated to x.prec(): Horner over the first variable with the
// second variable bound to the series argument z.
QSeries eval_series(const BiPoly& p, const QSeries& x);

// Power-series branch of p(y, z) = 0 with y(0) = y0, which must be a simple
// root of p(., 0). Quadratically convergent Newton lifting to order K.
QSeries newton_lift(const BiPoly& p, const Rational& y0, int K);

}  // namespace rmalg
