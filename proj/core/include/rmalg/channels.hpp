#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmalg/bipoly.hpp"
#include "rmalg/rational.hpp"
#include "rmalg/transforms.hpp"

namespace rmalg {

enum class ExprKind { Atoms, MP, AR1, Scale, Shift, CorrWish, AgramWish, FreeMultiply };

// Immutable channel-construction AST. Build through the make_* factories,
// which enforce the structural invariants (weights sum to 1, locations >= 0
// and distinct, c > 0, s > 0, |alpha| < 1).
struct ChannelExpr {
    ExprKind kind;
    std::vector<std::pair<Rational, Rational>> atoms;  // (weight, location)
    Rational c, alpha, beta, s;
    std::shared_ptr<const ChannelExpr> a, b;

    std::string to_string() const;
};

using ExprPtr = std::shared_ptr<const ChannelExpr>;

ExprPtr make_atoms(std::vector<std::pair<Rational, Rational>> atoms);
ExprPtr make_mp(const Rational& c);
ExprPtr make_ar1(const Rational& alpha);
ExprPtr make_scale(ExprPtr child, const Rational& alpha);
ExprPtr make_shift(ExprPtr child, const Rational& beta);
ExprPtr make_corr_wish(ExprPtr a, ExprPtr b, const Rational& c);
ExprPtr make_agram_wish(ExprPtr a, const Rational& c, const Rational& s);
ExprPtr make_free_multiply(ExprPtr a, ExprPtr b);

// W = (1/N_t) G B G' for i.i.d. CN(0,1) G with N_r/N_t -> c. Realized as a
// rational substitution into L_mz^B and squarefree-reduced.
BiPoly wishart_lmz(const BiPoly& lmzB, const Rational& c);

// Information-plus-noise W = (1/N_t)(R + sG)(R + sG)' with (1/N_t)RR' -> F^A.
BiPoly agram_lmz(const BiPoly& lmzA, const Rational& c, const Rational& s);

// Free multiplicative convolution via the S-transform chain
// (MZ -> MUZ -> PSIZ -> CHIW -> SW, resultant product, chain inverted).
BiPoly free_multiply(const BiPoly& lmzA, const BiPoly& lmzW);

// Doubly correlated Gram matrix: free_multiply(lmzA, wishart_lmz(lmzB, c)).
BiPoly corr_wish(const BiPoly& lmzA, const BiPoly& lmzB, const Rational& c);

// Structural mean (exact M_1) of the limiting distribution.
Rational mean_of(const ChannelExpr& e);

// Structural second moment (exact M_2), propagated through the same
// recursion (Gram second-moment identity, information-plus-noise identity,
// free-product formula). Used to pin branch separation past the mean.
Rational second_moment_of(const ChannelExpr& e);

// Structural mass at zero when certifiable from the expression shape.
std::optional<Rational> zero_mass_of(const ChannelExpr& e);

struct CompiledChannel {
    BiPoly lmz;
    Rational c;              // outermost stochastic aspect ratio (1 if deterministic)
    Rational mean;           // propagated M_1
    Rational second_moment;  // propagated M_2
    std::optional<Rational> zero_mass;
    ExprPtr expr;
};

// Builds L_mz recursively, unifies the aspect ratio across stochastic nodes
// (mismatch is an error), and verifies the propagated-mean branch exists.
CompiledChannel compile(const ExprPtr& expr);

}  // namespace rmalg
