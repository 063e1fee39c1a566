#include "rmalg/upoly.hpp"

#include <algorithm>
#include <sstream>

#include "rmalg/error.hpp"

namespace rmalg {

namespace {
const Rational kZero(0);
}

UPoly UPoly::constant(const Rational& v) {
    UPoly p;
    if (v != 0) p.c_.push_back(v);
    return p;
}

UPoly UPoly::monomial(int k, const Rational& v) {
    UPoly p;
    if (v != 0) {
        p.c_.assign(static_cast<size_t>(k) + 1, Rational(0));
        p.c_.back() = v;
    }
    return p;
}

const Rational& UPoly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return kZero;
    return c_[static_cast<size_t>(k)];
}

void UPoly::set_coeff(int k, const Rational& v) {
    if (k >= static_cast<int>(c_.size())) {
        if (v == 0) return;
        c_.resize(static_cast<size_t>(k) + 1, Rational(0));
    }
    c_[static_cast<size_t>(k)] = v;
    trim();
}

const Rational& UPoly::lc() const {
    if (c_.empty()) return kZero;
    return c_.back();
}

void UPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    r.trim();
    return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly();
    UPoly r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j)
            if (b.c_[j] != 0) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
}

UPoly UPoly::operator*(const Rational& s) const {
    if (s == 0) return UPoly();
    UPoly r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
}

UPoly UPoly::derivative() const {
    UPoly r;
    if (deg() < 1) return r;
    r.c_.resize(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = c_[i] * Rational(static_cast<long>(i));
    r.trim();
    return r;
}

Rational UPoly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::complex<double> UPoly::eval(std::complex<double> x) const {
    std::complex<double> acc(0, 0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

std::string UPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = deg(); k >= 0; --k) {
        const Rational& v = coeff(k);
        if (v == 0) continue;
        if (!first) os << (sgn(v) > 0 ? " + " : " - ");
        else if (sgn(v) < 0) os << "-";
        Rational av = abs(v);
        if (av != 1 || k == 0) os << to_string(av);
        if (k > 0) {
            if (av != 1) os << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
        first = false;
    }
    return os.str();
}

std::pair<UPoly, UPoly> divrem(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) fail(ErrorKind::Domain, "division by zero polynomial");
    UPoly r = a, q;
    while (!r.is_zero() && r.deg() >= b.deg()) {
        int k = r.deg() - b.deg();
        Rational t = r.lc() / b.lc();
        q.set_coeff(k, q.coeff(k) + t);
        r = r - UPoly::monomial(k, t) * b;
    }
    return {q, r};
}

UPoly div_exact(const UPoly& a, const UPoly& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) fail(ErrorKind::Domain, "inexact univariate division");
    return q;
}

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a, y = b;
    while (!y.is_zero()) {
        UPoly r = divrem(x, y).second;
        // Keep remainders primitive to curb coefficient growth.
        if (!r.is_zero()) r = primitive_part(r);
        x = y;
        y = r;
    }
    if (x.is_zero()) return x;
    UPoly g = primitive_part(x);
    if (sgn(g.lc()) < 0) g = -g;
    return g;
}

UPoly squarefree_part(const UPoly& a) {
    if (a.deg() < 1) return a;
    UPoly g = gcd(a, a.derivative());
    if (g.deg() < 1) return a;
    return div_exact(a, g);
}

Rational numeric_content(const UPoly& a) {
    if (a.is_zero()) return Rational(0);
    mpz_class num_gcd(0), den_lcm(1);
    for (const Rational& v : a.coeffs()) {
        if (v == 0) continue;
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
    }
    Rational c(num_gcd, den_lcm);
    c.canonicalize();
    return c;
}

UPoly primitive_part(const UPoly& a) {
    if (a.is_zero()) return a;
    Rational c = numeric_content(a);
    UPoly r = a;
    return r * (Rational(1) / c);
}

namespace {

// Sturm chain: signed remainders of (p, p'), content-normalized (positive
// factors only, so sign counts are preserved).
std::vector<UPoly> sturm_chain(const UPoly& p) {
    std::vector<UPoly> chain;
    chain.push_back(p);
    chain.push_back(p.derivative());
    while (!chain.back().is_zero() && chain.back().deg() >= 0) {
        const UPoly& s0 = chain[chain.size() - 2];
        const UPoly& s1 = chain.back();
        if (s1.is_zero()) break;
        UPoly r = divrem(s0, s1).second;
        if (r.is_zero()) break;
        r = primitive_part(r);
        chain.push_back(-r);
        if (chain.back().deg() == 0) break;
    }
    return chain;
}

int sign_variations(const std::vector<UPoly>& chain, const Rational& x) {
    int vars = 0, prev = 0;
    for (const UPoly& s : chain) {
        int sg = sgn(s.eval(x));
        if (sg == 0) continue;
        if (prev != 0 && sg != prev) ++vars;
        prev = sg;
    }
    return vars;
}

}  // namespace

std::vector<RootInterval> isolate_real_roots(const UPoly& a) {
    std::vector<RootInterval> out;
    if (a.deg() < 1) return out;
    UPoly p = squarefree_part(primitive_part(a));
    if (p.deg() < 1) return out;

    // Cauchy bound.
    Rational bound(1);
    for (int k = 0; k < p.deg(); ++k) {
        Rational t = abs(p.coeff(k) / p.lc());
        if (t > bound) bound = t;
    }
    bound += 1;

    auto chain = sturm_chain(p);
    auto count = [&](const Rational& lo, const Rational& hi) {
        return sign_variations(chain, lo) - sign_variations(chain, hi);
    };

    struct Seg {
        Rational lo, hi;
        int n;
    };
    std::vector<Seg> work;
    {
        Rational lo = -bound, hi = bound;
        int n = count(lo, hi);
        if (n > 0) work.push_back({lo, hi, n});
    }
    while (!work.empty()) {
        Seg s = work.back();
        work.pop_back();
        if (s.n == 1) {
            // Counting is over (lo, hi]; pin an exact root at hi if present.
            if (p.eval(s.hi) == 0) out.push_back({s.hi, s.hi, true});
            else out.push_back({s.lo, s.hi, false});
            continue;
        }
        Rational mid = (s.lo + s.hi) / 2;
        if (p.eval(mid) == 0) {
            out.push_back({mid, mid, true});
            // Shrink a window around the exact root until it holds no others.
            Rational eps = (s.hi - s.lo) / 4;
            while (count(mid - eps, mid + eps) > 1) eps /= 16;
            int nl = count(s.lo, mid - eps);
            int nr = count(mid + eps, s.hi);
            if (nl > 0) work.push_back({s.lo, mid - eps, nl});
            if (nr > 0) work.push_back({mid + eps, s.hi, nr});
            continue;
        }
        int nl = count(s.lo, mid);
        int nr = s.n - nl;
        if (nl > 0) work.push_back({s.lo, mid, nl});
        if (nr > 0) work.push_back({mid, s.hi, nr});
    }
    std::sort(out.begin(), out.end(),
              [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
    return out;
}

std::vector<double> real_roots(const UPoly& a, double width) {
    std::vector<double> roots;
    if (a.deg() < 1) return roots;
    UPoly p = squarefree_part(primitive_part(a));
    if (p.deg() < 1) return roots;

    // Bisection refinement on the sign of p (roots are simple).
    for (const RootInterval& iv : isolate_real_roots(p)) {
        if (iv.exact) {
            roots.push_back(to_double(iv.lo));
            continue;
        }
        Rational l = iv.lo, h = iv.hi;
        int slo = sgn(p.eval(l));
        while (to_double(h - l) > width * std::max(1.0, std::abs(to_double(l)))) {
            Rational mid = (l + h) / 2;
            int sm = sgn(p.eval(mid));
            if (sm == 0) {
                l = mid;
                h = mid;
                break;
            }
            if (sm == slo) l = mid;
            else h = mid;
        }
        roots.push_back(to_double((l + h) / 2));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

Rational simplest_nonneg(const Rational& lo, const Rational& hi) {
    // lo <= hi, both >= 0. Classic continued-fraction descent.
    mpz_class fl_lo, fl_hi;
    mpz_fdiv_q(fl_lo.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
    mpz_fdiv_q(fl_hi.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
    Rational ceil_lo = (lo == Rational(fl_lo)) ? lo : Rational(fl_lo) + 1;
    if (ceil_lo <= hi) return ceil_lo;  // an integer fits
    // Same integer part n: answer = n + 1/simplest(1/(hi-n), 1/(lo-n)).
    Rational n(fl_lo);
    Rational inv = simplest_nonneg(Rational(1) / (hi - n), Rational(1) / (lo - n));
    return n + Rational(1) / inv;
}

}  // namespace

Rational simplest_in_interval(const Rational& lo, const Rational& hi) {
    if (lo > hi) fail(ErrorKind::Domain, "simplest_in_interval: empty interval");
    if (sgn(lo) <= 0 && sgn(hi) >= 0) return Rational(0);
    if (sgn(lo) > 0) return simplest_nonneg(lo, hi);
    return -simplest_nonneg(-hi, -lo);
}

std::vector<Rational> rational_roots(const UPoly& a) {
    std::vector<Rational> out;
    if (a.deg() < 1) return out;
    UPoly p = squarefree_part(primitive_part(a));
    for (const RootInterval& iv : isolate_real_roots(p)) {
        if (iv.exact) {
            out.push_back(iv.lo);
            continue;
        }
        Rational l = iv.lo, h = iv.hi;
        int slo = sgn(p.eval(l));
        bool found = false;
        // Alternate interval-shrinking with simplest-rational probes; a
        // rational root is itself the simplest rational in a small enough
        // interval around it, so this terminates quickly for rational roots.
        for (int round = 0; round < 48 && !found; ++round) {
            Rational cand = simplest_in_interval(l, h);
            if (p.eval(cand) == 0) {
                out.push_back(cand);
                found = true;
                break;
            }
            for (int step = 0; step < 8; ++step) {
                Rational mid = (l + h) / 2;
                int sm = sgn(p.eval(mid));
                if (sm == 0) {
                    out.push_back(mid);
                    found = true;
                    break;
                }
                if (sm == slo) l = mid;
                else h = mid;
            }
        }
    }
    return out;
}

}  // namespace rmalg
