#include "rmalg/series.hpp"

#include <algorithm>

#include "rmalg/error.hpp"

namespace rmalg {

QSeries QSeries::constant(int prec, const Rational& v) {
    QSeries s(prec);
    s[0] = v;
    return s;
}

QSeries QSeries::truncated(int prec) const {
    QSeries s(prec);
    for (int k = 0; k <= std::min(prec, this->prec()); ++k) s[k] = (*this)[k];
    return s;
}

bool QSeries::is_zero() const {
    for (const auto& v : c_)
        if (v != 0) return false;
    return true;
}

QSeries operator+(const QSeries& a, const QSeries& b) {
    int prec = std::min(a.prec(), b.prec());
    QSeries r(prec);
    for (int k = 0; k <= prec; ++k) r[k] = a[k] + b[k];
    return r;
}

QSeries operator-(const QSeries& a, const QSeries& b) {
    int prec = std::min(a.prec(), b.prec());
    QSeries r(prec);
    for (int k = 0; k <= prec; ++k) r[k] = a[k] - b[k];
    return r;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
    int prec = std::min(a.prec(), b.prec());
    QSeries r(prec);
    for (int i = 0; i <= prec; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j <= prec; ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    return r;
}

QSeries operator/(const QSeries& a, const QSeries& b) {
    if (b[0] == 0) fail(ErrorKind::Domain, "series division by non-unit");
    int prec = std::min(a.prec(), b.prec());
    QSeries q(prec);
    for (int k = 0; k <= prec; ++k) {
        Rational acc = a[k];
        for (int j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
        q[k] = acc / b[0];
    }
    return q;
}

QSeries eval_series(const BiPoly& p, const QSeries& x) {
    int prec = x.prec();
    QSeries acc(prec);
    for (int i = p.deg1(); i >= 0; --i) {
        QSeries rowser(prec);
        UPoly row = p.row(i);
        for (int j = 0; j <= std::min(row.deg(), prec); ++j) rowser[j] = row.coeff(j);
        acc = acc * x + rowser;
    }
    return acc;
}

QSeries newton_lift(const BiPoly& p, const Rational& y0, int K) {
    if (K < 0) fail(ErrorKind::Domain, "negative series order");
    BiPoly dp = p.derivative1();
    {
        // Simple-root requirement at z = 0.
        Rational v = p.eval(y0, Rational(0));
        if (v != 0) fail(ErrorKind::Domain, "newton_lift: y0 is not a root at z = 0");
        Rational d = dp.eval(y0, Rational(0));
        if (d == 0) fail(ErrorKind::Compile, "degenerate expansion");
    }
    int prec = 0;
    QSeries x = QSeries::constant(0, y0);
    while (prec < K) {
        prec = std::min(2 * prec + 1, K);
        QSeries xe(prec);
        for (int k = 0; k <= x.prec(); ++k) xe[k] = x[k];
        QSeries num = eval_series(p, xe);
        QSeries den = eval_series(dp, xe);
        x = xe - num / den;
    }
    QSeries residual = eval_series(p, x);
    if (!residual.is_zero()) fail(ErrorKind::Compile, "newton_lift failed to converge");
    return x;
}

}  // namespace rmalg
