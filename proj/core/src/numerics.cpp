#include "rmalg/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "rmalg/error.hpp"
#include "rmalg/polyops.hpp"

namespace rmalg {

namespace {

constexpr double kResidualBound = 1e-9;
constexpr double kOnThreshold = 1e-6;   // density level declaring an interval "on"
constexpr double kQuadTol = 1e-7;

using Cplx = std::complex<double>;

std::string cplx_str(Cplx z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

// Univariate complex coefficients of p in its first variable at fixed z.
std::vector<Cplx> coeffs_at(const std::vector<std::vector<double>>& rows, Cplx z) {
    std::vector<Cplx> c(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        Cplx acc(0, 0);
        for (auto it = rows[i].rbegin(); it != rows[i].rend(); ++it) acc = acc * z + *it;
        c[i] = acc;
    }
    return c;
}

Cplx poly_eval(const std::vector<Cplx>& c, Cplx m) {
    Cplx acc(0, 0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * m + *it;
    return acc;
}

Cplx poly_eval_d(const std::vector<Cplx>& c, Cplx m) {
    Cplx acc(0, 0);
    for (size_t k = c.size(); k-- > 1;) acc = acc * m + c[k] * static_cast<double>(k);
    return acc;
}

double backward_scale(const std::vector<Cplx>& c, Cplx m) {
    double am = std::abs(m), t = 1.0, scale = 0.0;
    for (const Cplx& v : c) {
        scale += std::abs(v) * t;
        t *= am;
    }
    return scale > 0 ? scale : 1.0;
}

std::vector<Cplx> roots_from_coeffs(std::vector<Cplx> c, Cplx z_for_error) {
    double maxc = 0;
    for (const Cplx& v : c) maxc = std::max(maxc, std::abs(v));
    if (maxc == 0) fail(ErrorKind::Numeric, "zero polynomial at z = " + cplx_str(z_for_error));
    // Deflate vanished leading coefficients.
    while (c.size() > 1 && std::abs(c.back()) <= 1e-13 * maxc) c.pop_back();
    int deg = static_cast<int>(c.size()) - 1;
    std::vector<Cplx> roots;
    if (deg <= 0) return roots;
    if (deg == 1) {
        roots.push_back(-c[0] / c[1]);
    } else {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<size_t>(i)] / c.back();
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        if (es.info() != Eigen::Success)
            fail(ErrorKind::Numeric, "eigenvalue solve failed at z = " + cplx_str(z_for_error));
        for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
    }
    // Newton polish.
    for (Cplx& r : roots) {
        for (int it = 0; it < 8; ++it) {
            Cplx f = poly_eval(c, r);
            Cplx df = poly_eval_d(c, r);
            if (std::abs(df) == 0) break;
            Cplx step = f / df;
            r -= step;
            if (std::abs(step) < 1e-15 * (1 + std::abs(r))) break;
        }
    }
    for (const Cplx& r : roots) {
        double rel = std::abs(poly_eval(c, r)) / backward_scale(c, r);
        if (!(rel < kResidualBound))
            fail(ErrorKind::Numeric,
                 "ill-conditioned root (residual " + std::to_string(rel) + ") at z = " +
                     cplx_str(z_for_error));
    }
    return roots;
}

// Branch tracking along one support interval: positivity of Im(m), nearest
// continuation from the cached anchors, max-Im seeding at the first sample.
class BranchTracker {
public:
    BranchTracker(const std::vector<std::vector<double>>& rows, double xi)
        : rows_(rows), xi_(xi) {}

    double f(double x) {
        auto hit = anchors_.find(x);
        if (hit != anchors_.end()) return std::max(0.0, hit->second.imag()) / M_PI;
        auto roots = roots_from_coeffs(coeffs_at(rows_, Cplx(x, xi_)), Cplx(x, xi_));
        if (roots.empty()) fail(ErrorKind::Numeric, "no roots at x = " + std::to_string(x));
        Cplx chosen;
        if (anchors_.empty()) {
            chosen = *std::max_element(roots.begin(), roots.end(),
                                       [](Cplx a, Cplx b) { return a.imag() < b.imag(); });
        } else {
            Cplx anchor = nearest_anchor(x);
            std::vector<Cplx> pool;
            for (Cplx r : roots)
                if (r.imag() > 1e-12) pool.push_back(r);
            if (pool.empty()) pool = roots;
            std::sort(pool.begin(), pool.end(), [&](Cplx a, Cplx b) {
                return std::abs(a - anchor) < std::abs(b - anchor);
            });
            chosen = pool.front();
            // Tracking is unresolved when a second upper-half root sits at a
            // comparable distance from the anchor and is not a near-duplicate
            // of the chosen one.
            if (pool.size() >= 2) {
                double d1 = std::abs(pool[0] - anchor);
                double d2 = std::abs(pool[1] - anchor);
                double sep = std::abs(pool[0] - pool[1]);
                bool both_carry_density =
                    pool[0].imag() / M_PI > 1e-3 && pool[1].imag() / M_PI > 1e-3;
                if (d1 > 0.6 * d2 && sep > 0.1 * (1.0 + std::abs(anchor)) && both_carry_density)
                    fail(ErrorKind::Numeric, "branch ambiguity at x = " + std::to_string(x));
            }
        }
        anchors_[x] = chosen;
        min_im_ = std::min(min_im_, chosen.imag());
        return std::max(0.0, chosen.imag()) / M_PI;
    }

    double min_im() const { return min_im_; }

private:
    Cplx nearest_anchor(double x) const {
        auto it = anchors_.lower_bound(x);
        if (it == anchors_.end()) return std::prev(it)->second;
        if (it == anchors_.begin()) return it->second;
        auto lo = std::prev(it);
        return (x - lo->first <= it->first - x) ? lo->second : it->second;
    }

    const std::vector<std::vector<double>>& rows_;
    double xi_;
    std::map<double, Cplx> anchors_;
    double min_im_ = 0;
};

template <typename F>
double adaptive_simpson_rec(F& f, double a, double fa, double b, double fb, double m, double fm,
                            double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 28) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, depth);
}

// Shared density workspace: support edges, on-intervals, per-interval
// trackers, and the atomic part for first-degree encodings.
struct Workspace {
    bool atomic = false;
    std::vector<std::pair<double, double>> atoms;  // (location, weight)
    std::vector<double> edges;
    std::vector<Interval> intervals;
    std::vector<std::vector<double>> rows;
    double xi = 0;
    std::vector<std::unique_ptr<BranchTracker>> trackers;

    double f(double x) {
        for (size_t i = 0; i < intervals.size(); ++i)
            if (x >= intervals[i].lo - 1e-12 && x <= intervals[i].hi + 1e-12)
                return trackers[i]->f(x);
        return 0.0;
    }
};

void extract_atoms(const BiPoly& p, Workspace& ws) {
    // Degree-1 encoding: m(z) = -B(z)/A(z), purely atomic measure with
    // weights given by the residues at the (simple) poles.
    UPoly A = p.row(1), B = p.row(0);
    UPoly g = gcd(A, B);
    if (g.deg() > 0) {
        A = div_exact(A, g);
        B = div_exact(B, g);
    }
    UPoly Ad = A.derivative();
    for (double x : real_roots(A)) {
        Cplx ax = Ad.eval(Cplx(x, 0));
        Cplx bx = B.eval(Cplx(x, 0));
        double w = (bx / ax).real();
        if (w > 1e-12) ws.atoms.emplace_back(x, w);
    }
}

Workspace build_workspace(const CompiledChannel& ch, double xi) {
    Workspace ws;
    ws.xi = xi;
    const BiPoly& p = ch.lmz;
    if (p.deg1() < 1) fail(ErrorKind::Domain, "density: not a transform encoding");
    if (p.deg1() == 1) {
        ws.atomic = true;
        extract_atoms(p, ws);
        return ws;
    }
    ws.rows = double_rows(p);
    ws.edges = support_candidates(p);
    if (ws.edges.size() < 2) return ws;

    // Mark the gaps between consecutive edge candidates whose midpoint
    // carries density; merge adjacent marked gaps. The probe runs at a much
    // smaller offset than the inversion xi: genuine continuous density is
    // stable under xi -> 0 while a point mass at distance d only contributes
    // an O(xi/d^2) Lorentzian tail, which must not switch a gap on.
    std::vector<std::pair<size_t, size_t>> on;
    const double xi_probe = std::min(xi, 1e-11);
    for (size_t i = 0; i + 1 < ws.edges.size(); ++i) {
        double lo = ws.edges[i], hi = ws.edges[i + 1];
        if (hi - lo < 1e-12) continue;
        BranchTracker probe(ws.rows, xi_probe);
        double mid = 0.5 * (lo + hi);
        if (probe.f(mid) > kOnThreshold) {
            if (!on.empty() && on.back().second == i) on.back().second = i + 1;
            else on.emplace_back(i, i + 1);
        }
    }
    for (auto& [a, b] : on) ws.intervals.push_back({ws.edges[a], ws.edges[b]});

    // Left-to-right pre-march seeds each tracker's anchors so that adaptive
    // sampling later always finds a close continuation point.
    for (const Interval& iv : ws.intervals) {
        auto tracker = std::make_unique<BranchTracker>(ws.rows, xi);
        const int n = 128;
        for (int k = 0; k <= n; ++k) {
            double x = iv.lo + (iv.hi - iv.lo) * k / n;
            (void)tracker->f(x);
        }
        ws.trackers.push_back(std::move(tracker));
    }
    return ws;
}

}  // namespace

GridSpec parse_grid_spec(std::string_view text) {
    GridSpec g;
    std::string s(text);
    char colon1 = 0, colon2 = 0;
    std::istringstream is(s);
    if (!(is >> g.lo >> colon1 >> g.hi >> colon2 >> g.n) || colon1 != ':' || colon2 != ':')
        fail(ErrorKind::Parse, "bad grid spec '" + s + "', expected a:b:n");
    if (!(g.hi > g.lo) || g.n < 2) fail(ErrorKind::Parse, "bad grid spec '" + s + "'");
    return g;
}

std::vector<std::complex<double>> roots_in_m(const BiPoly& mz, std::complex<double> z) {
    if (mz.deg1() < 1) fail(ErrorKind::Domain, "roots_in_m: constant in the first variable");
    auto rows = double_rows(mz);
    return roots_from_coeffs(coeffs_at(rows, z), z);
}

StieltjesSample stieltjes_sample(const CompiledChannel& ch, std::complex<double> z) {
    if (!(z.imag() > 0)) fail(ErrorKind::Domain, "stieltjes_sample: Im(z) must be positive");
    const BiPoly& p = ch.lmz;
    if (p.deg1() < 1) fail(ErrorKind::Domain, "stieltjes_sample: not a transform encoding");
    auto rows = double_rows(p);
    // Start where every encoded branch satisfies m ~ -1/z and walk down.
    double big = 8.0 * (1.0 + std::abs(z));
    Cplx cur(z.real(), big);
    Cplx m = -1.0 / cur;
    const int steps = 48;
    for (int k = 0; k <= steps; ++k) {
        double t = static_cast<double>(k) / steps;
        // Geometric descent in the imaginary part keeps steps small near z.
        double im = big * std::pow(z.imag() / big, t);
        Cplx zk(z.real(), im);
        auto roots = roots_from_coeffs(coeffs_at(rows, zk), zk);
        if (roots.empty()) fail(ErrorKind::Numeric, "no branch at " + cplx_str(zk));
        m = *std::min_element(roots.begin(), roots.end(), [&](Cplx a, Cplx b) {
            return std::abs(a - m) < std::abs(b - m);
        });
    }
    StieltjesSample out;
    out.z = z;
    out.m = m;
    auto c = coeffs_at(rows, z);
    out.branch_residual = std::abs(poly_eval(c, m)) / backward_scale(c, m);
    return out;
}

std::vector<double> support_candidates(const BiPoly& mz) {
    if (mz.deg1() < 2) return {};
    BiPoly sf = squarefree_in_first(mz);
    if (sf.deg1() < 2) return {};
    UPoly disc = discriminant_in_first(sf);
    if (disc.is_zero()) return {};
    std::vector<double> roots = real_roots(disc);
    // Collapse near-duplicates left by refinement.
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || r - out.back() > 1e-9 * std::max(1.0, std::abs(r))) out.push_back(r);
    return out;
}

DensityCurve density(const CompiledChannel& ch, const GridSpec* user_grid, double xi) {
    Workspace ws = build_workspace(ch, xi);
    DensityCurve dc;
    dc.xi = xi;

    if (ws.atomic) {
        dc.atoms = ws.atoms;
        dc.zero_mass_rule = "atomic";
        for (const auto& [x, w] : ws.atoms)
            if (std::abs(x) < 1e-12) dc.mass_at_zero += w;
        if (user_grid) {
            for (int k = 0; k < user_grid->n; ++k) {
                double x = user_grid->lo +
                           (user_grid->hi - user_grid->lo) * k / (user_grid->n - 1);
                dc.grid.push_back(x);
                dc.f.push_back(0.0);
            }
        }
        return dc;
    }

    dc.support = ws.intervals;
    for (size_t i = 0; i < ws.intervals.size(); ++i) {
        const Interval& iv = ws.intervals[i];
        BranchTracker& tr = *ws.trackers[i];
        dc.continuous_mass +=
            adaptive_simpson([&](double x) { return tr.f(x); }, iv.lo, iv.hi, kQuadTol);
    }

    if (ch.zero_mass) {
        dc.mass_at_zero = to_double(*ch.zero_mass);
        dc.zero_mass_rule = "structural";
    } else {
        dc.mass_at_zero = std::max(0.0, 1.0 - dc.continuous_mass);
        dc.zero_mass_rule = "deficit";
    }
    if (dc.mass_at_zero > 1e-9) dc.atoms.emplace_back(0.0, dc.mass_at_zero);

    // Conservation guard: an encoding whose branches do not form a
    // probability distribution (possible for formal inputs) must not yield a
    // silently deficient curve.
    double total = dc.continuous_mass + dc.mass_at_zero;
    if (total < 1.0 - 1e-3 || total > 1.0 + 1e-3)
        fail(ErrorKind::Numeric, "mass conservation violated (total " + std::to_string(total) +
                                     "); the encoding does not yield a recoverable density");

    GridSpec grid;
    if (user_grid) grid = *user_grid;
    else {
        double lo = ws.intervals.empty() ? 0.0 : ws.intervals.front().lo;
        double hi = ws.intervals.empty() ? 1.0 : ws.intervals.back().hi;
        double margin = 0.05 * (hi - lo > 0 ? hi - lo : 1.0);
        grid = {lo - margin, hi + margin, 512};
    }
    for (int k = 0; k < grid.n; ++k) {
        double x = grid.lo + (grid.hi - grid.lo) * k / (grid.n - 1);
        dc.grid.push_back(x);
        dc.f.push_back(ws.f(x));
    }
    double min_im = 0;
    for (const auto& tr : ws.trackers) min_im = std::min(min_im, tr->min_im());
    dc.max_negative_im = min_im;
    return dc;
}

ShannonCurve shannon_transform(const CompiledChannel& ch, const std::vector<double>& gammas,
                               double xi) {
    for (double g : gammas)
        if (!(g > 0)) fail(ErrorKind::Domain, "shannon_transform: gamma must be positive");
    Workspace ws = build_workspace(ch, xi);
    // The same conservation guard as density(): quadrature over a deficient
    // spectrum would silently underestimate every value.
    {
        double atom_mass = 0;
        for (const auto& [x, w] : ws.atoms) atom_mass += w;
        double continuous = 0;
        for (size_t i = 0; i < ws.intervals.size(); ++i)
            continuous += adaptive_simpson(
                [&](double x) { return ws.trackers[i]->f(x); }, ws.intervals[i].lo,
                ws.intervals[i].hi, kQuadTol);
        double zero = ch.zero_mass ? to_double(*ch.zero_mass)
                                   : std::max(0.0, 1.0 - continuous - atom_mass);
        double total = continuous + atom_mass + zero;
        if (total < 1.0 - 1e-3 || total > 1.0 + 1e-3)
            fail(ErrorKind::Numeric,
                 "mass conservation violated (total " + std::to_string(total) +
                     "); the encoding does not yield a recoverable density");
    }
    ShannonCurve sc;
    sc.method = "quadrature";
    sc.gammas = gammas;
    for (double gamma : gammas) {
        double v = 0;
        for (const auto& [x, w] : ws.atoms) v += w * std::log1p(gamma * x);
        for (size_t i = 0; i < ws.intervals.size(); ++i) {
            const Interval& iv = ws.intervals[i];
            BranchTracker& tr = *ws.trackers[i];
            v += adaptive_simpson([&](double x) { return std::log1p(gamma * x) * tr.f(x); },
                                  iv.lo, iv.hi, kQuadTol);
        }
        sc.values.push_back(v);
        sc.converged.push_back(true);
    }
    return sc;
}

std::vector<double> density_moments(const CompiledChannel& ch, int kmax, double xi) {
    Workspace ws = build_workspace(ch, xi);
    std::vector<double> out(static_cast<size_t>(kmax) + 1, 0.0);
    for (int k = 0; k <= kmax; ++k) {
        for (size_t i = 0; i < ws.intervals.size(); ++i) {
            const Interval& iv = ws.intervals[i];
            BranchTracker& tr = *ws.trackers[i];
            out[static_cast<size_t>(k)] += adaptive_simpson(
                [&](double x) { return std::pow(x, k) * tr.f(x); }, iv.lo, iv.hi, kQuadTol);
        }
    }
    return out;
}

std::pair<double, bool> shannon_series_eval(const std::vector<Rational>& nu, double gamma,
                                            int K, double lambda_max) {
    if (!(gamma > 0)) fail(ErrorKind::Domain, "shannon_series_eval: gamma must be positive");
    double sum = 0, g = 1;
    int k = 0;
    for (const Rational& v : nu) {
        if (k++ >= K) break;
        g *= gamma;
        sum += to_double(v) * g;
    }
    return {sum, gamma * lambda_max < 1.0};
}

double lambda_max_of(const CompiledChannel& ch) {
    if (ch.lmz.deg1() == 1) {
        Workspace ws;
        extract_atoms(ch.lmz, ws);
        double m = 0;
        for (const auto& [x, w] : ws.atoms) m = std::max(m, x);
        return m;
    }
    auto cand = support_candidates(ch.lmz);
    return cand.empty() ? 0.0 : cand.back();
}

double ergodic_capacity(double v, int Nr, int Nt, CapacitySide side) {
    if (Nr <= 0 || Nt <= 0) fail(ErrorKind::Domain, "ergodic_capacity: dimensions must be positive");
    return side == CapacitySide::NrSide ? Nr * v : Nt * v;
}

}  // namespace rmalg
