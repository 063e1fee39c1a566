// Command-line front end: channel expressions in, polynomials / exact moment
// series / densities / Shannon curves / Monte Carlo comparisons out.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rmalg/channels.hpp"
#include "rmalg/expr_parser.hpp"
#include "rmalg/montecarlo.hpp"
#include "rmalg/numerics.hpp"
#include "rmalg/transforms.hpp"

using namespace rmalg;

namespace {

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Parse:
        case ErrorKind::Domain: return 2;
        case ErrorKind::Compile: return 3;
        case ErrorKind::Numeric: return 4;
    }
    return 1;
}

struct Output {
    std::string path;
    std::ostream& stream() {
        if (path.empty()) return std::cout;
        if (!file.is_open()) {
            file.open(path);
            if (!file) fail(ErrorKind::Domain, "cannot open output file '" + path + "'");
        }
        return file;
    }
    std::ofstream file;
};

std::vector<double> parse_gamma_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) fail(ErrorKind::Parse, "empty gamma list");
    for (double g : out)
        if (!(g > 0)) fail(ErrorKind::Parse, "gamma values must be positive");
    return out;
}

std::vector<double> gamma_range(const std::string& spec) {
    GridSpec gs = parse_grid_spec(spec);
    std::vector<double> out;
    for (int k = 0; k < gs.n; ++k)
        out.push_back(gs.lo + (gs.hi - gs.lo) * k / (gs.n - 1));
    for (double g : out)
        if (!(g > 0)) fail(ErrorKind::Parse, "gamma range must be positive");
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

void run_mc_table(std::ostream& os, const std::string& channel_tpl,
                  const std::vector<std::pair<int, int>>& dims, int trials, std::uint64_t seed,
                  int K, int threads) {
    os << "Nr,Nt,c,k,nu_hat,nu_theory,stderr\n";
    for (auto [nr, nt] : dims) {
        Rational c = rational(nr, nt);
        std::string expr_text = channel_tpl;
        const std::string key = "{c}";
        auto pos = expr_text.find(key);
        while (pos != std::string::npos) {
            expr_text.replace(pos, key.size(), to_string(c));
            pos = expr_text.find(key);
        }
        ExprPtr expr = parse_channel_expr(expr_text);
        CompiledChannel ch = compile(expr);
        MomentSeries ms = moment_series(mz_to_muz(ch.lmz), K, ch.mean, ch.second_moment);
        McConfig cfg;
        cfg.expr = expr;
        cfg.Nr = nr;
        cfg.Nt = nt;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.K = K;
        cfg.threads = threads;
        McEstimate est = estimate(cfg);
        for (int k = 1; k <= K; ++k) {
            os << nr << "," << nt << "," << fmt(to_double(c)) << "," << k << ","
               << fmt(est.nu_hat[static_cast<size_t>(k - 1)]) << ","
               << fmt(to_double(ms.shannon[static_cast<size_t>(k - 1)])) << ","
               << fmt(est.nu_se[static_cast<size_t>(k - 1)]) << "\n";
        }
        std::cerr << "# " << expr_text << " Nr=" << nr << " Nt=" << nt << " "
                  << est.metadata_json() << "\n";
    }
}

void run_fig(std::ostream& os, int trials, std::uint64_t seed, int threads) {
    const int nr = 50, nt = 200;
    std::vector<double> gammas = {0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10, 20, 50};
    std::vector<std::string> channels = {
        "mp(1/4)", "corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),1/4)"};
    for (const auto& text : channels) {
        ExprPtr expr = parse_channel_expr(text);
        CompiledChannel ch = compile(expr);
        ShannonCurve theory = shannon_transform(ch, gammas);
        McConfig cfg;
        cfg.expr = expr;
        cfg.Nr = nr;
        cfg.Nt = nt;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.K = 1;
        cfg.gammas = gammas;
        cfg.threads = threads;
        McEstimate est = estimate(cfg);
        os << "# channel: " << text << "\n";
        os << "gamma,V_hat,stderr,V_theory\n";
        for (size_t i = 0; i < gammas.size(); ++i)
            os << fmt(gammas[i]) << "," << fmt(est.shannon_hat[i]) << ","
               << fmt(est.shannon_se[i]) << "," << fmt(theory.values[i]) << "\n";
        std::cerr << "# " << text << " " << est.metadata_json() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic-numeric calculator for algebraic random-matrix channels"};
    app.require_subcommand(1);

    bool bits = false;
    bool dump_poly = false;
    int degree_cap_opt = 64;
    app.add_flag("--bits", bits, "report Shannon values in bits instead of nats");
    app.add_flag("--dump-poly", dump_poly, "emit the canonical polynomial serialization");
    app.add_option("--degree-cap", degree_cap_opt, "per-variable polynomial degree cap");

    std::string expr_text, out_path, grid_spec, gamma_csv, gamma_range_spec;
    int K = 4;
    double xi = 1e-7;
    int nr = 50, nt = 200, trials = 2000, threads = 0;
    std::uint64_t seed = 12345;
    std::string reproduce_what;

    auto* cmd_build = app.add_subcommand("build", "canonical L_mz encoding of a channel");
    cmd_build->add_option("expr", expr_text, "channel expression")->required();
    cmd_build->add_option("--out", out_path);

    auto* cmd_moments = app.add_subcommand("moments", "exact limiting moments and Shannon coefficients");
    cmd_moments->add_option("expr", expr_text)->required();
    cmd_moments->add_option("-K,--order", K, "truncation order");
    cmd_moments->add_option("--out", out_path);

    auto* cmd_density = app.add_subcommand("density", "limiting eigenvalue density by Stieltjes inversion");
    cmd_density->add_option("expr", expr_text)->required();
    cmd_density->add_option("--grid", grid_spec, "sampling grid a:b:n");
    cmd_density->add_option("--xi", xi, "inversion offset");
    cmd_density->add_option("--out", out_path);

    auto* cmd_shannon = app.add_subcommand("shannon", "Shannon transform by quadrature and series");
    cmd_shannon->add_option("expr", expr_text)->required();
    cmd_shannon->add_option("--gamma", gamma_csv, "comma-separated gamma list");
    cmd_shannon->add_option("--gamma-range", gamma_range_spec, "gamma grid a:b:n");
    cmd_shannon->add_option("-K,--order", K, "series truncation order");
    cmd_shannon->add_option("--xi", xi);
    cmd_shannon->add_option("--out", out_path);

    auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo validation of a channel");
    cmd_mc->add_option("expr", expr_text)->required();
    cmd_mc->add_option("--Nr", nr)->required();
    cmd_mc->add_option("--Nt", nt)->required();
    cmd_mc->add_option("--trials", trials);
    cmd_mc->add_option("--seed", seed);
    cmd_mc->add_option("--gamma", gamma_csv);
    cmd_mc->add_option("-K,--order", K);
    cmd_mc->add_option("--threads", threads);
    cmd_mc->add_option("--out", out_path);

    auto* cmd_rep = app.add_subcommand("reproduce", "reference experiment configurations");
    cmd_rep->add_option("what", reproduce_what, "table1a | table1b | fig1")->required();
    cmd_rep->add_option("--trials", trials);
    cmd_rep->add_option("--seed", seed);
    cmd_rep->add_option("--threads", threads);
    cmd_rep->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        set_degree_cap(degree_cap_opt);
        const double unit = bits ? 1.0 / std::log(2.0) : 1.0;
        Output out;
        out.path = out_path;

        if (cmd_build->parsed()) {
            ExprPtr expr = parse_channel_expr(expr_text);
            CompiledChannel ch = compile(expr);
            std::ostream& os = out.stream();
            os << ch.lmz.to_text() << "\n";
            os << "D_m = " << ch.lmz.deg1() << ", D_z = " << ch.lmz.deg2()
               << ", c = " << to_string(ch.c) << ", mean = " << to_string(ch.mean) << "\n";
        } else if (cmd_moments->parsed()) {
            if (K < 1) fail(ErrorKind::Parse, "K must be >= 1");
            ExprPtr expr = parse_channel_expr(expr_text);
            CompiledChannel ch = compile(expr);
            if (dump_poly) std::cerr << ch.lmz.to_text() << "\n";
            MomentSeries ms = moment_series(mz_to_muz(ch.lmz), K, ch.mean, ch.second_moment);
            std::ostream& os = out.stream();
            std::string json = ms.to_json();
            // Append decimal renderings.
            std::ostringstream dec;
            dec << ",\"M_decimal\":[";
            for (int k = 0; k < K; ++k)
                dec << (k ? "," : "") << fmt(to_double(ms.moments[static_cast<size_t>(k)]));
            dec << "],\"nu_decimal\":[";
            for (int k = 0; k < K; ++k)
                dec << (k ? "," : "") << fmt(to_double(ms.shannon[static_cast<size_t>(k)]));
            dec << "]}";
            json.back() = ' ';
            os << json.substr(0, json.size() - 1) << dec.str() << "\n";
        } else if (cmd_density->parsed()) {
            ExprPtr expr = parse_channel_expr(expr_text);
            CompiledChannel ch = compile(expr);
            if (dump_poly) std::cerr << ch.lmz.to_text() << "\n";
            GridSpec gs;
            bool has_grid = !grid_spec.empty();
            if (has_grid) gs = parse_grid_spec(grid_spec);
            DensityCurve dc = density(ch, has_grid ? &gs : nullptr, xi);
            std::ostream& os = out.stream();
            os << "x,f\n";
            for (size_t i = 0; i < dc.grid.size(); ++i)
                os << fmt(dc.grid[i]) << "," << fmt(dc.f[i]) << "\n";
            std::ostringstream meta;
            meta << "{\"xi\":" << dc.xi << ",\"quad_tol\":1e-7,\"support\":[";
            for (size_t i = 0; i < dc.support.size(); ++i)
                meta << (i ? "," : "") << "[" << fmt(dc.support[i].lo) << ","
                     << fmt(dc.support[i].hi) << "]";
            meta << "],\"continuous_mass\":" << fmt(dc.continuous_mass)
                 << ",\"mass_at_zero\":" << fmt(dc.mass_at_zero) << ",\"zero_mass_rule\":\""
                 << dc.zero_mass_rule << "\",\"atoms\":[";
            for (size_t i = 0; i < dc.atoms.size(); ++i)
                meta << (i ? "," : "") << "[" << fmt(dc.atoms[i].first) << ","
                     << fmt(dc.atoms[i].second) << "]";
            meta << "]}";
            if (out_path.empty()) {
                std::cerr << meta.str() << "\n";
            } else {
                std::ofstream mf(out_path + ".meta.json");
                mf << meta.str() << "\n";
            }
        } else if (cmd_shannon->parsed()) {
            ExprPtr expr = parse_channel_expr(expr_text);
            CompiledChannel ch = compile(expr);
            if (dump_poly) std::cerr << ch.lmz.to_text() << "\n";
            std::vector<double> gammas;
            if (!gamma_csv.empty()) gammas = parse_gamma_list(gamma_csv);
            else if (!gamma_range_spec.empty()) gammas = gamma_range(gamma_range_spec);
            else fail(ErrorKind::Parse, "shannon: provide --gamma or --gamma-range");
            ShannonCurve quad = shannon_transform(ch, gammas, xi);
            MomentSeries ms = moment_series(mz_to_muz(ch.lmz), std::max(K, 1), ch.mean, ch.second_moment);
            double lmax = lambda_max_of(ch);
            std::ostream& os = out.stream();
            os << "gamma,V,method,converged\n";
            for (size_t i = 0; i < gammas.size(); ++i)
                os << fmt(gammas[i]) << "," << fmt(quad.values[i] * unit) << ",quadrature,1\n";
            for (size_t i = 0; i < gammas.size(); ++i) {
                auto [v, conv] = shannon_series_eval(ms.shannon, gammas[i], K, lmax);
                os << fmt(gammas[i]) << "," << fmt(v * unit) << ",series," << (conv ? 1 : 0)
                   << "\n";
            }
        } else if (cmd_mc->parsed()) {
            ExprPtr expr = parse_channel_expr(expr_text);
            CompiledChannel ch = compile(expr);
            if (dump_poly) std::cerr << ch.lmz.to_text() << "\n";
            McConfig cfg;
            cfg.expr = expr;
            cfg.Nr = nr;
            cfg.Nt = nt;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.K = K;
            cfg.threads = threads;
            if (!gamma_csv.empty()) cfg.gammas = parse_gamma_list(gamma_csv);
            MomentSeries ms = moment_series(mz_to_muz(ch.lmz), K, ch.mean, ch.second_moment);
            McEstimate est = estimate(cfg);
            std::ostream& os = out.stream();
            os << "Nr,Nt,c,k,nu_hat,nu_theory,stderr\n";
            for (int k = 1; k <= K; ++k)
                os << nr << "," << nt << "," << fmt(est.c_empirical) << "," << k << ","
                   << fmt(est.nu_hat[static_cast<size_t>(k - 1)]) << ","
                   << fmt(to_double(ms.shannon[static_cast<size_t>(k - 1)])) << ","
                   << fmt(est.nu_se[static_cast<size_t>(k - 1)]) << "\n";
            if (!cfg.gammas.empty()) {
                ShannonCurve theory = shannon_transform(ch, cfg.gammas, xi);
                os << "\ngamma,V_hat,stderr,V_theory\n";
                for (size_t i = 0; i < cfg.gammas.size(); ++i)
                    os << fmt(cfg.gammas[i]) << "," << fmt(est.shannon_hat[i] * unit) << ","
                       << fmt(est.shannon_se[i] * unit) << "," << fmt(theory.values[i] * unit)
                       << "\n";
            }
            std::cerr << "# " << est.metadata_json() << "\n";
        } else if (cmd_rep->parsed()) {
            std::ostream& os = out.stream();
            std::vector<std::pair<int, int>> dims = {{50, 200}, {50, 100}, {50, 50}, {50, 26}};
            if (reproduce_what == "table1a") {
                run_mc_table(os, "mp({c})", dims, trials, seed, 3, threads);
            } else if (reproduce_what == "table1b") {
                run_mc_table(os, "corrWish(atoms(1/2:1,1/2:2),atoms(1/2:1,1/2:2),{c})", dims,
                             trials, seed, 3, threads);
            } else if (reproduce_what == "fig1") {
                run_fig(os, trials, seed, threads);
            } else {
                fail(ErrorKind::Parse, "unknown reproduce target '" + reproduce_what + "'");
            }
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
