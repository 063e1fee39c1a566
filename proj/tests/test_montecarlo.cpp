#include <doctest.h>

#include <cmath>

#include "rmalg/expr_parser.hpp"
#include "rmalg/montecarlo.hpp"
#include "rmalg/transforms.hpp"

using namespace rmalg;

TEST_CASE("philox gaussian stream: statistics and determinism") {
    GaussStream gs(7, 3);
    double sum = 0, sumsq = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        double x = gs.next();
        sum += x;
        sumsq += x * x;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.03));

    // Unit complex variance.
    GaussStream gc(7, 4);
    double cs = 0;
    for (int i = 0; i < n; ++i) cs += std::norm(gc.next_cn());
    CHECK(cs / n == doctest::Approx(1.0).epsilon(0.03));

    // Identical (seed, trial) -> bit-identical stream.
    GaussStream a(123, 9), b(123, 9);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    // Distinct trials decorrelate.
    GaussStream c(123, 10);
    bool all_equal = true;
    GaussStream a2(123, 9);
    for (int i = 0; i < 10; ++i) all_equal = all_equal && (a2.next() == c.next());
    CHECK_FALSE(all_equal);
}

TEST_CASE("largest-remainder atom multiplicities") {
    FactorPlan p1 = realize_factors(
        parse_channel_expr("atoms(1/2:1,1/2:2)"), 50, 50);
    REQUIRE(p1.root->atom_mult.size() == 2);
    CHECK(p1.root->atom_mult[0] == 25);
    CHECK(p1.root->atom_mult[1] == 25);

    FactorPlan p2 = realize_factors(parse_channel_expr("atoms(1/3:1,2/3:2)"), 50, 50);
    CHECK(p2.root->atom_mult[0] == 17);
    CHECK(p2.root->atom_mult[1] == 33);

    // A weight that rounds to zero multiplicity is recorded as a warning.
    FactorPlan p3 = realize_factors(parse_channel_expr("atoms(1/100:1,99/100:2)"), 3, 3);
    CHECK(p3.root->atom_mult[0] == 0);
    CHECK(!p3.warnings.empty());
}

TEST_CASE("AR(1) factor is the Cholesky of the Toeplitz covariance") {
    FactorPlan p = realize_factors(parse_channel_expr("corrWish(ar1(1/2),ar1(1/2),1)"), 3, 3);
    const auto& L = p.root->a->det_factor;  // 3x3 lower factor of the receive side
    CHECK(L(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(L(1, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(L(1, 1).real() == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    CHECK(L(2, 1).real() == doctest::Approx(std::sqrt(3.0) / 2 * 0.5).epsilon(1e-3));
}

TEST_CASE("scalar channel: single-trial statistics") {
    McConfig cfg;
    cfg.expr = parse_channel_expr("mp(1)");
    cfg.Nr = 1;
    cfg.Nt = 1;
    cfg.trials = 400;
    cfg.seed = 99;
    cfg.K = 1;
    McEstimate est = estimate(cfg);
    CHECK(est.trace_mean[0] > 0);
    CHECK(est.nu_hat[0] == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("per-trial log-det identity across the two Gram orientations") {
    McConfig cfg;
    cfg.expr = parse_channel_expr("corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),2)");
    cfg.Nr = 8;
    cfg.Nt = 4;
    cfg.trials = 50;
    cfg.seed = 5;
    cfg.K = 2;
    cfg.gammas = {0.5, 2.0};
    cfg.check_det_identity = true;
    McEstimate est = estimate(cfg);
    CHECK(est.max_det_identity_gap < 1e-9);
}

TEST_CASE("seeded reproducibility and worker-count invariance") {
    McConfig cfg;
    cfg.expr = parse_channel_expr("corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),1/2)");
    cfg.Nr = 16;
    cfg.Nt = 32;
    cfg.trials = 64;
    cfg.seed = 2024;
    cfg.K = 3;
    cfg.gammas = {1.0};
    cfg.threads = 1;
    McEstimate a = estimate(cfg);
    McEstimate b = estimate(cfg);
    cfg.threads = 4;
    McEstimate c = estimate(cfg);
    CHECK(a.nu_hat == b.nu_hat);
    CHECK(a.shannon_hat == b.shannon_hat);
    CHECK(a.nu_hat == c.nu_hat);
    CHECK(a.nu_se == c.nu_se);
    CHECK(a.shannon_hat == c.shannon_hat);
    CHECK(a.rng_id == "philox4x32-10/box-muller");
}

TEST_CASE("first moment is unbiased: nu_hat_1 within 4 standard errors") {
    McConfig cfg;
    cfg.expr = parse_channel_expr("corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),1)");
    cfg.Nr = 40;
    cfg.Nt = 40;
    cfg.trials = 400;
    cfg.seed = 31;
    cfg.K = 1;
    McEstimate est = estimate(cfg);
    CHECK(std::abs(est.nu_hat[0] - 2.25) < 4 * est.nu_se[0] + 1e-12);

    // Information-plus-noise mean rule M1 = a1 + s^2 = 2.
    McConfig ag;
    ag.expr = parse_channel_expr("agramWish(atoms(1:1),1/2,1)");
    ag.Nr = 40;
    ag.Nt = 80;
    ag.trials = 400;
    ag.seed = 77;
    ag.K = 1;
    McEstimate ea = estimate(ag);
    CHECK(std::abs(ea.nu_hat[0] - 2.0) < 4 * ea.nu_se[0] + 1e-12);
}

TEST_CASE("empirical moments approach the limit as N grows") {
    ExprPtr expr = parse_channel_expr("mp(1/2)");
    CompiledChannel ch = compile(expr);
    MomentSeries ms = moment_series(mz_to_muz(ch.lmz), 3, ch.mean, ch.second_moment);
    auto run = [&](int nr) {
        McConfig cfg;
        cfg.expr = expr;
        cfg.Nr = nr;
        cfg.Nt = 2 * nr;
        cfg.trials = 5000;
        cfg.seed = 424242;
        cfg.K = 3;
        return estimate(cfg);
    };
    McEstimate small = run(10), large = run(40);
    for (int k = 0; k < 3; ++k) {
        double err_small = std::abs(small.nu_hat[static_cast<size_t>(k)] -
                                    to_double(ms.shannon[static_cast<size_t>(k)]));
        double err_large = std::abs(large.nu_hat[static_cast<size_t>(k)] -
                                    to_double(ms.shannon[static_cast<size_t>(k)]));
        CHECK(err_large < err_small);
    }
}

TEST_CASE("config validation") {
    McConfig cfg;
    cfg.expr = parse_channel_expr("mp(1)");
    cfg.Nr = 4;
    cfg.Nt = 4;
    cfg.trials = 0;
    CHECK_THROWS_AS(estimate(cfg), Error);

    // Mismatched geometry is recorded as a warning, not an error.
    cfg.trials = 2;
    cfg.Nt = 8;
    McEstimate est = estimate(cfg);
    bool warned = false;
    for (const auto& w : est.warnings)
        if (w.find("aspect ratio") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("shift of a stochastic node is sampled through a per-trial factor") {
    McConfig cfg;
    cfg.expr = parse_channel_expr("shift(mp(1/2),1)");
    cfg.Nr = 24;
    cfg.Nt = 48;
    cfg.trials = 300;
    cfg.seed = 11;
    cfg.K = 1;
    McEstimate est = estimate(cfg);
    CHECK(std::abs(est.nu_hat[0] - 2.0) < 4 * est.nu_se[0] + 1e-12);
}

TEST_CASE("agram realization requires enough columns for the mean matrix") {
    McConfig cfg;
    cfg.expr = parse_channel_expr("agramWish(atoms(1:1),2,1)");
    cfg.Nr = 8;
    cfg.Nt = 4;
    cfg.trials = 1;
    cfg.K = 1;
    CHECK_THROWS_AS(estimate(cfg), Error);
}
