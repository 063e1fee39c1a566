#include "rmalg/montecarlo.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include "rmalg/error.hpp"

namespace rmalg {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::uint64_t key,
                                               const std::array<std::uint32_t, 4>& ctr_in) {
    std::array<std::uint32_t, 4> ctr = ctr_in;
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t lo0, hi0, lo1, hi1;
        mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
        mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
        std::array<std::uint32_t, 4> next = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        ctr = next;
        k0 += kPhiloxW32A;
        k1 += kPhiloxW32B;
    }
    return ctr;
}

GaussStream::GaussStream(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}

double GaussStream::next() {
    if (has_pending_) {
        has_pending_ = false;
        return pending_;
    }
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32),
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)};
    auto out = Philox4x32::block(seed_, ctr);
    ++block_;
    auto to_unit = [](std::uint32_t hi, std::uint32_t lo) {
        std::uint64_t u = (static_cast<std::uint64_t>(hi) << 32) | lo;
        double d = static_cast<double>(u >> 11) * (1.0 / 9007199254740992.0);
        return d > 0 ? d : 1.1102230246251565e-16;
    };
    double u1 = to_unit(out[0], out[1]);
    double u2 = to_unit(out[2], out[3]);
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    pending_ = r * std::sin(a);
    has_pending_ = true;
    return r * std::cos(a);
}

std::complex<double> GaussStream::next_cn() {
    double a = next();
    double b = next();
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    return {a * inv_sqrt2, b * inv_sqrt2};
}

namespace {

using Eigen::MatrixXcd;

int local_cols(int n, const Rational& c) {
    double nt = static_cast<double>(n) / to_double(c);
    int rounded = static_cast<int>(std::llround(nt));
    return std::max(rounded, 1);
}

std::vector<int> largest_remainder_multiplicities(
    const std::vector<std::pair<Rational, Rational>>& atoms, int n,
    std::vector<std::string>& warnings) {
    std::vector<int> mult(atoms.size(), 0);
    std::vector<std::pair<Rational, size_t>> rema;
    long assigned = 0;
    for (size_t i = 0; i < atoms.size(); ++i) {
        Rational target = atoms[i].first * Rational(n);
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), target.get_num().get_mpz_t(), target.get_den().get_mpz_t());
        long f = fl.get_si();
        mult[i] = static_cast<int>(f);
        assigned += f;
        rema.emplace_back(target - Rational(fl), i);
    }
    long leftover = n - assigned;
    std::stable_sort(rema.begin(), rema.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (long k = 0; k < leftover; ++k) ++mult[rema[static_cast<size_t>(k) % rema.size()].second];
    for (size_t i = 0; i < atoms.size(); ++i)
        if (mult[i] == 0)
            warnings.push_back("atom weight " + to_string(atoms[i].first) +
                               " rounds to zero multiplicity at N = " + std::to_string(n));
    return mult;
}

std::shared_ptr<PlanNode> plan_node(const ChannelExpr& e, int n,
                                    std::vector<std::string>& warnings) {
    auto p = std::make_shared<PlanNode>();
    p->kind = e.kind;
    p->n = n;
    switch (e.kind) {
        case ExprKind::Atoms: {
            p->deterministic = true;
            p->atom_mult = largest_remainder_multiplicities(e.atoms, n, warnings);
            Eigen::VectorXd d(n);
            int at = 0;
            for (size_t i = 0; i < e.atoms.size(); ++i)
                for (int k = 0; k < p->atom_mult[i]; ++k) d(at++) = std::sqrt(to_double(e.atoms[i].second));
            p->det_factor = d.cast<std::complex<double>>().asDiagonal();
            break;
        }
        case ExprKind::AR1: {
            p->deterministic = true;
            p->alpha = e.alpha;
            double a = to_double(e.alpha);
            Eigen::MatrixXd cov(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) cov(i, j) = std::pow(a, std::abs(i - j));
            Eigen::LLT<Eigen::MatrixXd> llt(cov);
            if (llt.info() != Eigen::Success)
                fail(ErrorKind::Numeric, "AR(1) covariance Cholesky failed");
            p->det_factor = Eigen::MatrixXd(llt.matrixL()).cast<std::complex<double>>();
            break;
        }
        case ExprKind::Scale: {
            p->alpha = e.alpha;
            p->a = plan_node(*e.a, n, warnings);
            p->deterministic = p->a->deterministic;
            if (p->deterministic)
                p->det_factor = std::sqrt(to_double(e.alpha)) * p->a->det_factor;
            break;
        }
        case ExprKind::Shift: {
            p->beta = e.beta;
            p->a = plan_node(*e.a, n, warnings);
            p->deterministic = p->a->deterministic;
            if (p->deterministic) {
                MatrixXcd m = p->a->det_factor * p->a->det_factor.adjoint() +
                              to_double(e.beta) * MatrixXcd::Identity(n, n);
                Eigen::LLT<MatrixXcd> llt(m);
                if (llt.info() != Eigen::Success)
                    fail(ErrorKind::Numeric, "shifted matrix is not positive semidefinite");
                p->det_factor = MatrixXcd(llt.matrixL());
            }
            break;
        }
        case ExprKind::MP: {
            p->c = e.c;
            p->nt = local_cols(n, e.c);
            break;
        }
        case ExprKind::CorrWish: {
            p->c = e.c;
            p->nt = local_cols(n, e.c);
            p->a = plan_node(*e.a, n, warnings);
            p->b = plan_node(*e.b, p->nt, warnings);
            break;
        }
        case ExprKind::AgramWish: {
            p->c = e.c;
            p->s = e.s;
            p->nt = local_cols(n, e.c);
            p->a = plan_node(*e.a, n, warnings);
            break;
        }
        case ExprKind::FreeMultiply: {
            p->a = plan_node(*e.a, n, warnings);
            p->b = plan_node(*e.b, n, warnings);
            if (p->a->deterministic && p->b->deterministic)
                warnings.push_back(
                    "freeMultiply of two deterministic inputs: finite-N sampling does not "
                    "realize the free product");
            break;
        }
    }
    return p;
}

MatrixXcd draw_gaussian(GaussStream& gs, int rows, int cols) {
    MatrixXcd g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = gs.next_cn();
    return g;
}

MatrixXcd pad_square(const MatrixXcd& f, int n) {
    if (f.cols() == n) return f;
    MatrixXcd out = MatrixXcd::Zero(n, n);
    out.leftCols(f.cols()) = f;
    return out;
}

// Factor F with node matrix = F F^H. Shapes may be rectangular; only the
// Gram products of factors matter distributionally.
MatrixXcd sample_factor(const PlanNode& p, GaussStream& gs) {
    switch (p.kind) {
        case ExprKind::Atoms:
        case ExprKind::AR1:
            return p.det_factor;
        case ExprKind::Scale: {
            if (p.deterministic) return p.det_factor;
            return std::sqrt(to_double(p.alpha)) * sample_factor(*p.a, gs);
        }
        case ExprKind::Shift: {
            if (p.deterministic) return p.det_factor;
            MatrixXcd f = sample_factor(*p.a, gs);
            MatrixXcd m =
                f * f.adjoint() + to_double(p.beta) * MatrixXcd::Identity(p.n, p.n);
            Eigen::LLT<MatrixXcd> llt(m);
            if (llt.info() != Eigen::Success)
                fail(ErrorKind::Numeric, "shifted matrix is not positive semidefinite");
            return MatrixXcd(llt.matrixL());
        }
        case ExprKind::MP: {
            MatrixXcd g = draw_gaussian(gs, p.n, p.nt);
            return g / std::sqrt(static_cast<double>(p.nt));
        }
        case ExprKind::CorrWish: {
            MatrixXcd fa = sample_factor(*p.a, gs);
            MatrixXcd fb = sample_factor(*p.b, gs);
            MatrixXcd g = draw_gaussian(gs, static_cast<int>(fa.cols()),
                                        static_cast<int>(fb.cols()));
            // H = F_A G F_B^H is N x Nt; W = (1/Nt) H H^H.
            MatrixXcd h = fa * g * fb.adjoint();
            return h / std::sqrt(static_cast<double>(p.nt));
        }
        case ExprKind::AgramWish: {
            MatrixXcd fa = sample_factor(*p.a, gs);
            if (fa.cols() > p.nt)
                fail(ErrorKind::Domain,
                     "agramWish: mean-matrix rank exceeds the local column count");
            double s = to_double(p.s);
            double snt = std::sqrt(static_cast<double>(p.nt));
            MatrixXcd r = MatrixXcd::Zero(p.n, p.nt);
            r.leftCols(fa.cols()) = snt * fa;
            MatrixXcd h = r + s * draw_gaussian(gs, p.n, p.nt);
            return h / snt;
        }
        case ExprKind::FreeMultiply: {
            MatrixXcd fa = pad_square(sample_factor(*p.a, gs), p.n);
            MatrixXcd fw = sample_factor(*p.b, gs);
            return fa * fw;
        }
    }
    fail(ErrorKind::Domain, "sample_factor: unknown node");
}

}  // namespace

FactorPlan realize_factors(const ExprPtr& expr, int Nr, int Nt) {
    if (!expr) fail(ErrorKind::Domain, "realize_factors: null expression");
    if (Nr < 1 || Nt < 1) fail(ErrorKind::Domain, "realize_factors: dimensions must be positive");
    FactorPlan plan;
    plan.root = plan_node(*expr, Nr, plan.warnings);
    // The outermost stochastic node's local column count should reproduce Nt.
    if (plan.root->nt > 0 && plan.root->nt != Nt)
        plan.warnings.push_back("outer column count " + std::to_string(plan.root->nt) +
                                " differs from requested Nt = " + std::to_string(Nt));
    return plan;
}

TrialStats sample_trial(const McConfig& cfg, const FactorPlan& plan, std::uint64_t trial) {
    GaussStream gs(cfg.seed, trial);
    MatrixXcd f = sample_factor(*plan.root, gs);
    const int nr = cfg.Nr;
    // tr((F F^H)^k) = tr((F^H F)^k): use the smaller Gram side.
    MatrixXcd gram = (f.cols() <= f.rows()) ? MatrixXcd(f.adjoint() * f)
                                            : MatrixXcd(f * f.adjoint());
    TrialStats st;
    MatrixXcd power = gram;
    for (int k = 1; k <= cfg.K; ++k) {
        st.trace_pow.push_back(power.trace().real() / nr);
        if (k < cfg.K) power = power * gram;
    }
    const int d = static_cast<int>(gram.rows());
    for (double gamma : cfg.gammas) {
        MatrixXcd m = MatrixXcd::Identity(d, d) + gamma * gram;
        Eigen::LLT<MatrixXcd> llt(m);
        if (llt.info() != Eigen::Success)
            fail(ErrorKind::Numeric, "Cholesky failed for I + gamma W in trial " +
                                         std::to_string(trial));
        double logdet = 0;
        const MatrixXcd& packed = llt.matrixLLT();
        for (int i = 0; i < d; ++i) logdet += std::log(std::real(packed(i, i)));
        st.logdet.push_back(2.0 * logdet / nr);
    }
    if (cfg.check_det_identity && !cfg.gammas.empty()) {
        // log det(I_N + g F F^H) = log det(I_r + g F^H F) for every factor.
        MatrixXcd other = (f.cols() <= f.rows()) ? MatrixXcd(f * f.adjoint())
                                                 : MatrixXcd(f.adjoint() * f);
        const int d2 = static_cast<int>(other.rows());
        double max_gap = 0;
        for (size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
            double gamma = cfg.gammas[gi];
            Eigen::LLT<MatrixXcd> llt2(MatrixXcd::Identity(d2, d2) + gamma * other);
            if (llt2.info() != Eigen::Success)
                fail(ErrorKind::Numeric, "Cholesky failed on the companion side");
            double logdet2 = 0;
            const MatrixXcd& packed2 = llt2.matrixLLT();
            for (int i = 0; i < d2; ++i) logdet2 += std::log(std::real(packed2(i, i)));
            double gap = std::abs(2.0 * logdet2 - st.logdet[gi] * nr);
            max_gap = std::max(max_gap, gap);
        }
        st.det_identity_gap = max_gap;
    }
    return st;
}

McEstimate estimate(const McConfig& cfg) {
    if (cfg.trials < 1) fail(ErrorKind::Domain, "estimate: trials must be positive");
    if (cfg.K < 1) fail(ErrorKind::Domain, "estimate: K must be positive");
    auto t0 = std::chrono::steady_clock::now();
    FactorPlan plan = realize_factors(cfg.expr, cfg.Nr, cfg.Nt);

    McEstimate est;
    est.K = cfg.K;
    est.gammas = cfg.gammas;
    est.trials_used = cfg.trials;
    est.seed = cfg.seed;
    est.rng_id = "philox4x32-10/box-muller";
    est.c_empirical = static_cast<double>(cfg.Nr) / cfg.Nt;
    est.warnings = plan.warnings;

    // Aspect-ratio consistency between the geometry and the expression.
    {
        std::optional<Rational> c;
        std::function<void(const ChannelExpr&)> walk = [&](const ChannelExpr& e) {
            if (e.kind == ExprKind::MP || e.kind == ExprKind::CorrWish ||
                e.kind == ExprKind::AgramWish) {
                if (!c) c = e.c;
            }
            if (e.a) walk(*e.a);
            if (e.b) walk(*e.b);
        };
        walk(*cfg.expr);
        if (c && std::abs(to_double(*c) - est.c_empirical) > 1e-12)
            est.warnings.push_back("empirical Nr/Nt = " + std::to_string(est.c_empirical) +
                                   " differs from the expression aspect ratio " + to_string(*c));
    }

    std::vector<TrialStats> stats(static_cast<size_t>(cfg.trials));
    int workers = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, cfg.trials));
    auto body = [&](int w) {
        for (int t = w; t < cfg.trials; t += workers)
            stats[static_cast<size_t>(t)] = sample_trial(cfg, plan, static_cast<std::uint64_t>(t));
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& th : pool) th.join();
    }

    // Reduce in trial order (worker-count invariant).
    const int n = cfg.trials;
    for (int k = 0; k < cfg.K; ++k) {
        double mean = 0;
        for (int t = 0; t < n; ++t) mean += stats[static_cast<size_t>(t)].trace_pow[static_cast<size_t>(k)];
        mean /= n;
        double var = 0;
        for (int t = 0; t < n; ++t) {
            double d = stats[static_cast<size_t>(t)].trace_pow[static_cast<size_t>(k)] - mean;
            var += d * d;
        }
        var = (n > 1) ? var / (n - 1) : 0.0;
        double se = std::sqrt(var / n);
        double sign = (k % 2 == 0) ? 1.0 : -1.0;  // k index 0 -> moment order 1
        est.trace_mean.push_back(mean);
        est.nu_hat.push_back(sign * mean / (k + 1));
        est.nu_se.push_back(se / (k + 1));
    }
    for (size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
        double mean = 0;
        for (int t = 0; t < n; ++t) mean += stats[static_cast<size_t>(t)].logdet[gi];
        mean /= n;
        double var = 0;
        for (int t = 0; t < n; ++t) {
            double d = stats[static_cast<size_t>(t)].logdet[gi] - mean;
            var += d * d;
        }
        var = (n > 1) ? var / (n - 1) : 0.0;
        est.shannon_hat.push_back(mean);
        est.shannon_se.push_back(std::sqrt(var / n));
    }
    for (int t = 0; t < n; ++t)
        est.max_det_identity_gap =
            std::max(est.max_det_identity_gap, stats[static_cast<size_t>(t)].det_identity_gap);

    est.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return est;
}

std::string McEstimate::metadata_json() const {
    std::ostringstream os;
    os << "{\"rng\":\"" << rng_id << "\",\"seed\":" << seed << ",\"trials\":" << trials_used
       << ",\"c_empirical\":" << c_empirical << ",\"wall_ms\":" << wall_ms
       << ",\"max_det_identity_gap\":" << max_det_identity_gap << ",\"warnings\":[";
    for (size_t i = 0; i < warnings.size(); ++i)
        os << (i ? "," : "") << '"' << warnings[i] << '"';
    os << "]}";
    return os.str();
}

}  // namespace rmalg
