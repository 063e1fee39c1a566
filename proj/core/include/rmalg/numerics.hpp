#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmalg/channels.hpp"

namespace rmalg {

struct StieltjesSample {
    std::complex<double> z;
    std::complex<double> m;
    double branch_residual = 0;  // relative backward error of L(m, z)
};

struct Interval {
    double lo = 0, hi = 0;
};

// Sampled limiting density. Channels of first-variable degree 1 are purely
// atomic: f is identically zero and the measure lives in `atoms`.
struct DensityCurve {
    std::vector<double> grid;
    std::vector<double> f;
    std::vector<Interval> support;
    double mass_at_zero = 0;
    double continuous_mass = 0;
    std::vector<std::pair<double, double>> atoms;  // (location, weight), zero included
    std::string zero_mass_rule;                    // "structural" | "deficit" | "atomic"
    double xi = 0;
    double max_negative_im = 0;  // most negative Im(m) seen on selected branches
};

struct ShannonCurve {
    std::vector<double> gammas;
    std::vector<double> values;
    std::string method;                // "quadrature" | "series"
    std::vector<bool> converged;       // per gamma (series method)
};

struct GridSpec {
    double lo = 0, hi = 0;
    int n = 0;
};
GridSpec parse_grid_spec(std::string_view text);  // "a:b:n"

// All D_m roots in the first variable at fixed complex z: companion-matrix
// eigenvalues polished by Newton, each with relative backward residual
// below 1e-9 (else a numeric error naming the offending z).
std::vector<std::complex<double>> roots_in_m(const BiPoly& mz, std::complex<double> z);

// The Stieltjes branch value at one z in the upper half plane, selected by a
// homotopy from the -1/z asymptote at large imaginary part down to z.
StieltjesSample stieltjes_sample(const CompiledChannel& ch, std::complex<double> z);

// Real branch points (continuous-spectrum edge candidates): real roots of the
// first-variable discriminant of the squarefree part, refined to 1e-12.
// Empty for first-variable degree < 2.
std::vector<double> support_candidates(const BiPoly& mz);

// Stieltjes inversion f(x) = Im m(x + i*xi)/pi with branch selection by
// positivity, continuity, and edge seeding.
DensityCurve density(const CompiledChannel& ch, const GridSpec* user_grid = nullptr,
                     double xi = 1e-7);

// Shannon transform by adaptive quadrature of log(1+gamma*x) f(x) over each
// support interval; purely atomic channels are summed analytically.
ShannonCurve shannon_transform(const CompiledChannel& ch, const std::vector<double>& gammas,
                               double xi = 1e-7);

// Continuous-part power moments int x^k f(x) dx for k = 0..kmax by adaptive
// quadrature over the detected support (atoms excluded; they are reported on
// the DensityCurve).
std::vector<double> density_moments(const CompiledChannel& ch, int kmax, double xi = 1e-7);

// Partial sum of the low-SNR series; `converged` flags gamma*lambda_max < 1.
std::pair<double, bool> shannon_series_eval(const std::vector<Rational>& nu, double gamma,
                                            int K, double lambda_max);

// Largest support candidate (or atom location) of a compiled channel.
double lambda_max_of(const CompiledChannel& ch);

enum class CapacitySide { NrSide, NtSide };

// Capacity normalization for a Shannon transform computed on the stated side.
double ergodic_capacity(double v, int Nr, int Nt, CapacitySide side);

}  // namespace rmalg
