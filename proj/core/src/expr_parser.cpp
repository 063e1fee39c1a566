#include "rmalg/expr_parser.hpp"

#include <cctype>

#include "rmalg/error.hpp"

namespace rmalg {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr run() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) err("trailing input");
        return e;
    }

private:
    [[noreturn]] void err(const std::string& msg) const {
        fail(ErrorKind::Parse, "parse error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek_is(char ch) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == ch;
    }

    void expect(char ch) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ch)
            err(std::string("expected '") + ch + "'");
        ++pos_;
    }

    std::string ident() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) )) ++pos_;
        if (pos_ == start) err("expected a channel constructor name");
        return std::string(text_.substr(start, pos_ - start));
    }

    Rational rational_lit() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        size_t digits = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            ++digits;
        }
        if (digits == 0) err("expected a rational literal");
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            size_t den_digits = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++den_digits;
            }
            if (den_digits == 0) err("expected a positive denominator");
        }
        try {
            return rational_from_string(text_.substr(start, pos_ - start));
        } catch (const Error&) {
            err("bad rational literal");
        }
    }

    ExprPtr expr() {
        std::string name = ident();
        expect('(');
        ExprPtr result;
        try {
            if (name == "atoms") {
                std::vector<std::pair<Rational, Rational>> atoms;
                while (true) {
                    Rational w = rational_lit();
                    expect(':');
                    Rational x = rational_lit();
                    atoms.emplace_back(w, x);
                    if (peek_is(',')) {
                        expect(',');
                        continue;
                    }
                    break;
                }
                result = make_atoms(std::move(atoms));
            } else if (name == "mp") {
                result = make_mp(rational_lit());
            } else if (name == "ar1") {
                result = make_ar1(rational_lit());
            } else if (name == "scale") {
                ExprPtr child = expr();
                expect(',');
                result = make_scale(std::move(child), rational_lit());
            } else if (name == "shift") {
                ExprPtr child = expr();
                expect(',');
                result = make_shift(std::move(child), rational_lit());
            } else if (name == "corrWish") {
                ExprPtr a = expr();
                expect(',');
                ExprPtr b = expr();
                expect(',');
                result = make_corr_wish(std::move(a), std::move(b), rational_lit());
            } else if (name == "agramWish") {
                ExprPtr a = expr();
                expect(',');
                Rational c = rational_lit();
                expect(',');
                result = make_agram_wish(std::move(a), c, rational_lit());
            } else if (name == "freeMultiply") {
                ExprPtr a = expr();
                expect(',');
                ExprPtr b = expr();
                result = make_free_multiply(std::move(a), std::move(b));
            } else {
                err("unknown channel constructor '" + name + "'");
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Domain)
                fail(ErrorKind::Parse,
                     "parse error at position " + std::to_string(pos_) + ": " + e.what());
            throw;
        }
        expect(')');
        return result;
    }

    std::string_view text_;
    size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_channel_expr(std::string_view text) {
    Parser p(text);
    return p.run();
}

}  // namespace rmalg
