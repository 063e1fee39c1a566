#include "rmalg/rational.hpp"

#include <cctype>

namespace rmalg {

Rational rational_from_string(std::string_view text) {
    size_t start = 0, end = text.size();
    while (start < end && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
    while (end > start && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    std::string s(text.substr(start, end - start));
    if (s.empty()) fail(ErrorKind::Parse, "empty rational literal");
    for (size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        bool ok = std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' ||
                  ((ch == '-' || ch == '+') && (i == 0 || s[i - 1] == '/'));
        if (!ok) fail(ErrorKind::Parse, "bad rational literal '" + s + "'");
    }
    try {
        Rational r(s);
        if (r.get_den() == 0) fail(ErrorKind::Parse, "zero denominator in '" + s + "'");
        if (sgn(Rational(r.get_den())) < 0)
            fail(ErrorKind::Parse, "denominator must be positive in '" + s + "'");
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        fail(ErrorKind::Parse, "bad rational literal '" + s + "'");
    }
}

std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return mpq_get_d(r.get_mpq_t()); }

Rational rat_pow(const Rational& base, unsigned long exp) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exp);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exp);
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace rmalg
