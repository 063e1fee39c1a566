#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rmalg/channels.hpp"

namespace rmalg {

// Philox4x32-10 counter-based generator (Salmon et al.). One block maps a
// (key, counter) pair to four 32-bit words; streams never share state, so
// trial t is reproducible independent of scheduling.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              const std::array<std::uint32_t, 4>& ctr);
};

// Standard-normal stream keyed by (seed, trial): Box-Muller over Philox
// uniforms. One block yields two N(0,1) draws; a CN(0,1) entry consumes one
// block exactly.
class GaussStream {
public:
    GaussStream(std::uint64_t seed, std::uint64_t trial);
    double next();
    std::complex<double> next_cn();

private:
    std::uint64_t seed_, trial_, block_ = 0;
    double pending_ = 0;
    bool has_pending_ = false;
};

struct McConfig {
    ExprPtr expr;
    int Nr = 0, Nt = 0;
    int trials = 2000;
    std::uint64_t seed = 12345;
    std::vector<double> gammas;
    int K = 3;
    int threads = 0;                 // 0 -> hardware concurrency
    bool check_det_identity = false; // per-trial log det(I+gHH')=log det(I+gH'H)
};

// Precomputed deterministic factors for one (expr, Nr, Nt) geometry.
struct PlanNode {
    ExprKind kind;
    int n = 0;        // output dimension of this node's matrix
    int nt = 0;       // local column dimension for stochastic nodes
    Eigen::MatrixXcd det_factor;  // deterministic nodes: matrix = F F^H
    std::vector<int> atom_mult;   // Atoms nodes: largest-remainder multiplicities
    Rational c, s, alpha, beta;
    std::shared_ptr<PlanNode> a, b;
    bool deterministic = false;
};

struct FactorPlan {
    std::shared_ptr<PlanNode> root;
    std::vector<std::string> warnings;
};

FactorPlan realize_factors(const ExprPtr& expr, int Nr, int Nt);

struct TrialStats {
    std::vector<double> trace_pow;  // tr(W^k)/Nr, k = 1..K
    std::vector<double> logdet;     // (1/Nr) log det(I + gamma W) per gamma
    double det_identity_gap = 0;
};

TrialStats sample_trial(const McConfig& cfg, const FactorPlan& plan, std::uint64_t trial);

struct McEstimate {
    int K = 0;
    std::vector<double> nu_hat, nu_se;          // k = 1..K
    std::vector<double> trace_mean;             // mean tr(W^k)/Nr
    std::vector<double> shannon_hat, shannon_se;
    std::vector<double> gammas;
    int trials_used = 0;
    std::uint64_t seed = 0;
    std::string rng_id;
    double c_empirical = 0;
    double wall_ms = 0;
    double max_det_identity_gap = 0;
    std::vector<std::string> warnings;

    std::string metadata_json() const;
};

// Aggregates seeded trials; deterministic for fixed (seed, trials) regardless
// of the worker count (per-trial statistics are reduced in trial order).
McEstimate estimate(const McConfig& cfg);

}  // namespace rmalg
