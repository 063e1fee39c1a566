#include "rmalg/bipoly.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include "rmalg/error.hpp"
#include "rmalg/polyops.hpp"

namespace rmalg {

namespace {
const Rational kZero(0);
std::atomic<int> g_degree_cap{64};
}

int degree_cap() { return g_degree_cap.load(); }
void set_degree_cap(int cap) {
    if (cap < 1) fail(ErrorKind::Domain, "degree cap must be positive");
    g_degree_cap.store(cap);
}

const char* tag_name(VarTag t) {
    switch (t) {
        case VarTag::MZ: return "MZ";
        case VarTag::MUZ: return "MUZ";
        case VarTag::PSIZ: return "PSIZ";
        case VarTag::CHIW: return "CHIW";
        case VarTag::SW: return "SW";
    }
    return "?";
}

std::pair<const char*, const char*> tag_vars(VarTag t) {
    switch (t) {
        case VarTag::MZ: return {"m", "z"};
        case VarTag::MUZ: return {"mu", "z"};
        case VarTag::PSIZ: return {"psi", "z"};
        case VarTag::CHIW: return {"chi", "w"};
        case VarTag::SW: return {"s", "w"};
    }
    return {"?", "?"};
}

VarTag tag_from_name(std::string_view name) {
    if (name == "MZ") return VarTag::MZ;
    if (name == "MUZ") return VarTag::MUZ;
    if (name == "PSIZ") return VarTag::PSIZ;
    if (name == "CHIW") return VarTag::CHIW;
    if (name == "SW") return VarTag::SW;
    fail(ErrorKind::Parse, "unknown variable tag '" + std::string(name) + "'");
}

BiPoly::BiPoly(VarTag tag, std::vector<std::vector<Rational>> rows) : tag_(tag) {
    size_t cols = 0;
    for (const auto& r : rows) cols = std::max(cols, r.size());
    if (rows.empty() || cols == 0) return;
    d1_ = static_cast<int>(rows.size()) - 1;
    d2_ = static_cast<int>(cols) - 1;
    c_.assign(rows.size() * cols, Rational(0));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) c_[i * cols + j] = rows[i][j];
    trim();
    check_cap();
}

BiPoly BiPoly::constant(VarTag tag, const Rational& v) {
    BiPoly p(tag);
    if (v != 0) {
        p.d1_ = 0;
        p.d2_ = 0;
        p.c_.assign(1, v);
    }
    return p;
}

BiPoly BiPoly::monomial(VarTag tag, int i, int j, const Rational& v) {
    BiPoly p(tag);
    if (v == 0) return p;
    p.d1_ = i;
    p.d2_ = j;
    p.c_.assign(static_cast<size_t>(i + 1) * (j + 1), Rational(0));
    p.c_.back() = v;
    p.check_cap();
    return p;
}

BiPoly BiPoly::from_rows(VarTag tag, const std::vector<UPoly>& rows) {
    std::vector<std::vector<Rational>> grid;
    grid.reserve(rows.size());
    for (const auto& r : rows) grid.push_back(r.coeffs());
    return BiPoly(tag, std::move(grid));
}

BiPoly BiPoly::with_tag(VarTag t) const {
    BiPoly p = *this;
    p.tag_ = t;
    return p;
}

const Rational& BiPoly::at(int i, int j) const {
    if (i < 0 || j < 0 || i > d1_ || j > d2_) return kZero;
    return c_[static_cast<size_t>(i) * (d2_ + 1) + j];
}

void BiPoly::set(int i, int j, const Rational& v) {
    if (i < 0 || j < 0) fail(ErrorKind::Domain, "negative exponent");
    if (i > d1_ || j > d2_) {
        if (v == 0) return;
        int nd1 = std::max(i, std::max(d1_, 0));
        int nd2 = std::max(j, std::max(d2_, 0));
        std::vector<Rational> nc(static_cast<size_t>(nd1 + 1) * (nd2 + 1), Rational(0));
        for (int a = 0; a <= d1_; ++a)
            for (int b = 0; b <= d2_; ++b)
                nc[static_cast<size_t>(a) * (nd2 + 1) + b] = at(a, b);
        c_ = std::move(nc);
        d1_ = nd1;
        d2_ = nd2;
    }
    c_[static_cast<size_t>(i) * (d2_ + 1) + j] = v;
    if (v == 0) trim();
    check_cap();
}

UPoly BiPoly::row(int i) const {
    std::vector<Rational> v;
    for (int j = 0; j <= d2_; ++j) v.push_back(at(i, j));
    return UPoly(std::move(v));
}

UPoly BiPoly::col(int j) const {
    std::vector<Rational> v;
    for (int i = 0; i <= d1_; ++i) v.push_back(at(i, j));
    return UPoly(std::move(v));
}

std::vector<UPoly> BiPoly::rows() const {
    std::vector<UPoly> out;
    for (int i = 0; i <= d1_; ++i) out.push_back(row(i));
    return out;
}

void BiPoly::trim() {
    if (d1_ < 0) return;
    int nd1 = -1, nd2 = -1;
    for (int i = 0; i <= d1_; ++i)
        for (int j = 0; j <= d2_; ++j)
            if (at(i, j) != 0) {
                nd1 = std::max(nd1, i);
                nd2 = std::max(nd2, j);
            }
    if (nd1 < 0) {
        c_.clear();
        d1_ = d2_ = -1;
        return;
    }
    if (nd1 == d1_ && nd2 == d2_) return;
    std::vector<Rational> nc(static_cast<size_t>(nd1 + 1) * (nd2 + 1));
    for (int i = 0; i <= nd1; ++i)
        for (int j = 0; j <= nd2; ++j) nc[static_cast<size_t>(i) * (nd2 + 1) + j] = at(i, j);
    c_ = std::move(nc);
    d1_ = nd1;
    d2_ = nd2;
}

void BiPoly::check_cap() const {
    int cap = 8 * degree_cap();
    if (d1_ > cap || d2_ > cap)
        fail(ErrorKind::Compile, "degree cap exceeded (" + std::to_string(d1_) + ", " +
                                     std::to_string(d2_) + " internal limit " +
                                     std::to_string(cap) + ")");
}

void enforce_degree_cap(const BiPoly& p, const char* context) {
    int cap = degree_cap();
    if (p.deg1() > cap || p.deg2() > cap)
        fail(ErrorKind::Compile, std::string(context) + ": degree cap exceeded (" +
                                     std::to_string(p.deg1()) + ", " + std::to_string(p.deg2()) +
                                     " vs cap " + std::to_string(cap) + ")");
}

BiPoly BiPoly::operator-() const {
    BiPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    BiPoly r(a.tag_);
    int d1 = std::max(a.d1_, b.d1_), d2 = std::max(a.d2_, b.d2_);
    if (d1 < 0) return r;
    r.d1_ = d1;
    r.d2_ = d2;
    r.c_.assign(static_cast<size_t>(d1 + 1) * (d2 + 1), Rational(0));
    for (int i = 0; i <= d1; ++i)
        for (int j = 0; j <= d2; ++j) {
            Rational v = a.at(i, j) + b.at(i, j);
            r.c_[static_cast<size_t>(i) * (d2 + 1) + j] = v;
        }
    r.trim();
    return r;
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r(a.tag_);
    if (a.is_zero() || b.is_zero()) return r;
    int d1 = a.d1_ + b.d1_, d2 = a.d2_ + b.d2_;
    r.d1_ = d1;
    r.d2_ = d2;
    r.c_.assign(static_cast<size_t>(d1 + 1) * (d2 + 1), Rational(0));
    for (int i = 0; i <= a.d1_; ++i)
        for (int j = 0; j <= a.d2_; ++j) {
            const Rational& av = a.at(i, j);
            if (av == 0) continue;
            for (int k = 0; k <= b.d1_; ++k)
                for (int l = 0; l <= b.d2_; ++l) {
                    const Rational& bv = b.at(k, l);
                    if (bv == 0) continue;
                    r.c_[static_cast<size_t>(i + k) * (d2 + 1) + (j + l)] += av * bv;
                }
        }
    r.trim();
    r.check_cap();
    return r;
}

BiPoly BiPoly::operator*(const Rational& s) const {
    BiPoly r(tag_);
    if (s == 0 || is_zero()) return r;
    r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
}

BiPoly BiPoly::pow(unsigned e) const {
    BiPoly r = BiPoly::constant(tag_, Rational(1));
    BiPoly base = *this;
    while (e) {
        if (e & 1u) r = r * base;
        base = (e >>= 1) ? base * base : base;
    }
    return r;
}

bool BiPoly::operator==(const BiPoly& o) const {
    return tag_ == o.tag_ && d1_ == o.d1_ && d2_ == o.d2_ && c_ == o.c_;
}

BiPoly BiPoly::derivative1() const {
    BiPoly r(tag_);
    if (d1_ < 1) return r;
    r.d1_ = d1_ - 1;
    r.d2_ = d2_;
    r.c_.assign(static_cast<size_t>(d1_) * (d2_ + 1), Rational(0));
    for (int i = 1; i <= d1_; ++i)
        for (int j = 0; j <= d2_; ++j)
            r.c_[static_cast<size_t>(i - 1) * (d2_ + 1) + j] = at(i, j) * Rational(i);
    r.trim();
    return r;
}

BiPoly BiPoly::derivative2() const {
    BiPoly r(tag_);
    if (d2_ < 1) return r;
    r.d1_ = d1_;
    r.d2_ = d2_ - 1;
    r.c_.assign(static_cast<size_t>(d1_ + 1) * d2_, Rational(0));
    for (int i = 0; i <= d1_; ++i)
        for (int j = 1; j <= d2_; ++j)
            r.c_[static_cast<size_t>(i) * d2_ + (j - 1)] = at(i, j) * Rational(j);
    r.trim();
    return r;
}

BiPoly BiPoly::transposed(VarTag new_tag) const {
    BiPoly r(new_tag);
    if (is_zero()) return r;
    r.d1_ = d2_;
    r.d2_ = d1_;
    r.c_.assign(c_.size(), Rational(0));
    for (int i = 0; i <= d1_; ++i)
        for (int j = 0; j <= d2_; ++j) r.c_[static_cast<size_t>(j) * (d1_ + 1) + i] = at(i, j);
    return r;
}

Rational BiPoly::eval(const Rational& a, const Rational& b) const {
    Rational acc(0);
    for (int i = d1_; i >= 0; --i) acc = acc * a + row(i).eval(b);
    return acc;
}

std::string BiPoly::to_text() const {
    std::ostringstream os;
    os << tag_name(tag_) << "; " << d1_ << "; " << d2_ << ";";
    for (int i = 0; i <= d1_; ++i)
        for (int j = 0; j <= d2_; ++j) os << " " << to_string(at(i, j));
    return os.str();
}

BiPoly BiPoly::from_text(std::string_view text) {
    std::string s(text);
    std::istringstream is(s);
    std::string tag_part;
    if (!std::getline(is, tag_part, ';')) fail(ErrorKind::Parse, "bad polynomial text");
    // strip whitespace
    auto strip = [](std::string v) {
        size_t b = v.find_first_not_of(" \t\n\r");
        size_t e = v.find_last_not_of(" \t\n\r");
        if (b == std::string::npos) return std::string();
        return v.substr(b, e - b + 1);
    };
    VarTag tag = tag_from_name(strip(tag_part));
    std::string d1s, d2s;
    if (!std::getline(is, d1s, ';') || !std::getline(is, d2s, ';'))
        fail(ErrorKind::Parse, "bad polynomial text (degrees)");
    int d1 = std::stoi(strip(d1s)), d2 = std::stoi(strip(d2s));
    if (d1 < 0 || d2 < 0) return BiPoly(tag);
    std::vector<std::vector<Rational>> rows(static_cast<size_t>(d1) + 1);
    for (int i = 0; i <= d1; ++i) {
        rows[static_cast<size_t>(i)].resize(static_cast<size_t>(d2) + 1);
        for (int j = 0; j <= d2; ++j) {
            std::string tok;
            if (!(is >> tok)) fail(ErrorKind::Parse, "bad polynomial text (coefficients)");
            rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = rational_from_string(tok);
        }
    }
    return BiPoly(tag, std::move(rows));
}

BiPoly normalize(const BiPoly& p) {
    if (p.is_zero()) fail(ErrorKind::Domain, "degenerate polynomial");
    // Numeric content: gcd of numerators over lcm of denominators.
    mpz_class num_gcd(0), den_lcm(1);
    for (int i = 0; i <= p.deg1(); ++i)
        for (int j = 0; j <= p.deg2(); ++j) {
            const Rational& v = p.at(i, j);
            if (v == 0) continue;
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num().get_mpz_t());
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
        }
    Rational content(num_gcd, den_lcm);
    content.canonicalize();
    BiPoly r = p * (Rational(1) / content);
    // Sign rule: lowest v2-order coefficient of the highest v1 row positive.
    int i = r.deg1();
    for (int j = 0; j <= r.deg2(); ++j) {
        const Rational& v = r.at(i, j);
        if (v != 0) {
            if (sgn(v) < 0) r = -r;
            break;
        }
    }
    return r;
}

BiPoly canonical(const BiPoly& p) {
    if (p.is_zero()) fail(ErrorKind::Domain, "degenerate polynomial");
    BiPoly r = remove_polynomial_content(p);
    return normalize(r);
}

BiPoly substitute_rational(const BiPoly& p, const BiPoly& n1, const BiPoly& d1,
                           const BiPoly& n2, const BiPoly& d2, VarTag out_tag) {
    if (p.is_zero()) fail(ErrorKind::Domain, "degenerate polynomial");
    if (d1.is_zero() || d2.is_zero())
        fail(ErrorKind::Domain, "substitution with zero denominator");
    int D1 = p.deg1(), D2 = p.deg2();
    auto powers = [&](const BiPoly& base, int top) {
        std::vector<BiPoly> pw;
        pw.push_back(BiPoly::constant(out_tag, Rational(1)));
        for (int k = 1; k <= top; ++k) pw.push_back(pw.back() * base);
        return pw;
    };
    auto n1p = powers(n1.with_tag(out_tag), D1);
    auto d1p = powers(d1.with_tag(out_tag), D1);
    auto n2p = powers(n2.with_tag(out_tag), D2);
    auto d2p = powers(d2.with_tag(out_tag), D2);
    BiPoly acc(out_tag);
    for (int i = 0; i <= D1; ++i)
        for (int j = 0; j <= D2; ++j) {
            const Rational& a = p.at(i, j);
            if (a == 0) continue;
            BiPoly term = n1p[static_cast<size_t>(i)] * d1p[static_cast<size_t>(D1 - i)] *
                          n2p[static_cast<size_t>(j)] * d2p[static_cast<size_t>(D2 - j)];
            acc = acc + term * a;
        }
    if (acc.is_zero()) fail(ErrorKind::Compile, "substitution annihilates polynomial");
    BiPoly out = canonical(acc);
    enforce_degree_cap(out, "substitute_rational");
    return out;
}

std::vector<std::vector<double>> double_rows(const BiPoly& p) {
    // Common power-of-two scaling keeps huge integer coefficients inside the
    // double range; the zero set is scale-invariant.
    long max_exp = -100000;
    for (int i = 0; i <= p.deg1(); ++i)
        for (int j = 0; j <= p.deg2(); ++j) {
            const Rational& v = p.at(i, j);
            if (v == 0) continue;
            long e = static_cast<long>(mpz_sizeinbase(v.get_num().get_mpz_t(), 2)) -
                     static_cast<long>(mpz_sizeinbase(v.get_den().get_mpz_t(), 2));
            max_exp = std::max(max_exp, e);
        }
    long shift = 0;
    if (max_exp > 500) shift = max_exp - 100;
    std::vector<std::vector<double>> rows(static_cast<size_t>(p.deg1()) + 1);
    for (int i = 0; i <= p.deg1(); ++i) {
        rows[static_cast<size_t>(i)].resize(static_cast<size_t>(p.deg2()) + 1);
        for (int j = 0; j <= p.deg2(); ++j) {
            Rational v = p.at(i, j);
            if (shift > 0) {
                mpq_class scaled;
                mpq_div_2exp(scaled.get_mpq_t(), v.get_mpq_t(), static_cast<unsigned long>(shift));
                v = scaled;
            }
            rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = to_double(v);
        }
    }
    return rows;
}

std::complex<double> eval_complex(const BiPoly& p, std::complex<double> v1,
                                  std::complex<double> v2) {
    if (p.is_zero()) return {0, 0};
    auto rows = double_rows(p);
    std::complex<double> acc(0, 0);
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        std::complex<double> rowval(0, 0);
        for (auto jt = it->rbegin(); jt != it->rend(); ++jt) rowval = rowval * v2 + *jt;
        acc = acc * v1 + rowval;
    }
    return acc;
}

}  // namespace rmalg
