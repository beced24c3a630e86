#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cellcov/model.hpp"

namespace cellcov {

struct SimOptions {
    int n_points = 2000; // PLPS truncation; tail bound documented in model.hpp
    int threads = 1;     // worker count; estimates do not depend on it
};

struct SimEstimate {
    double value = 0.0;
    double stderr_value = 0.0;
    long long runs = 0;
    std::uint64_t seed = 0;
    long long discards = 0;
};

// Fraction of realizations in which the best of the M per-RB SIRs exceeds
// theta. One PlpsSample per realization: xi and chi are shared across RBs
// (interference correlation), fading is iid per RB.
SimEstimate simulate_coverage(const NetworkModel& model, const Scheme& scheme, double theta,
                              long long runs, std::uint64_t seed, const SimOptions& opt = {});

// Same realizations evaluated against every threshold in the grid; each
// entry is the plain Monte Carlo estimator for its theta.
std::vector<SimEstimate> simulate_coverage_curve(const NetworkModel& model, const Scheme& scheme,
                                                 std::span<const double> theta_grid,
                                                 long long runs, std::uint64_t seed,
                                                 const SimOptions& opt = {});

// ---- 2-D deployment: effective-load estimation and end-to-end validation --

struct LoadTableEntry {
    int K = 0;
    double kappa_hat = 0.0;    // mean over realizations of n_bs/n_scheduled
    double stderr_value = 0.0; // sample sd of the per-realization ratios / sqrt(R)
    double mean_bs = 0.0;
    double mean_scheduled = 0.0;
    long long realizations = 0;
    long long discards = 0;
};

struct AffineFit {
    double eta0 = 0.0;
    double eta1 = 0.0;
    double predict(int K) const { return std::max(1.0, eta0 + eta1 * K); }
};

struct LoadEstimate {
    std::vector<LoadTableEntry> per_k;
    AffineFit fit;
    bool has_fit = false;

    std::string to_csv() const;
    std::string to_json() const;
};

// Random sequential scheduler of the deployment model: users are visited
// exactly once in uniform random order; a user is scheduled iff its strongest
// BS is neither serving nor muted and its 2nd..K-th strongest BSs are not
// serving. On success the strongest BS starts serving and BSs 2..K are muted.
// kappa_hat averages n_bs/n_scheduled over realizations; realizations with an
// empty schedule are discarded and counted.
LoadTableEntry estimate_effective_load(double alpha, double lambda_bs, double lambda_u,
                                       double sigma_db, int K, long long realizations,
                                       double window_side, std::uint64_t seed, int threads = 1);

// Multi-K variant sharing the deployments (and their rankings) across K.
LoadEstimate estimate_effective_load_table(double alpha, double lambda_bs, double lambda_u,
                                           double sigma_db, std::span<const int> Ks,
                                           long long realizations, double window_side,
                                           std::uint64_t seed, int threads = 1);

// Deployment-side coverage: SIR of scheduled users in the inner half-window,
// interference from serving BSs only; estimates the coverage of a user chosen
// uniformly among them (averaging over all candidates per realization).
std::vector<SimEstimate> simulate_deployment_coverage(const NetworkModel& model, double lambda_u,
                                                      int K, int M,
                                                      std::span<const double> theta_grid,
                                                      long long realizations, double window_side,
                                                      std::uint64_t seed, int threads = 1);

// Default simulation window 30/sqrt(lambda).
double default_window_side(double lambda_bs);

// ---- empirical PLPS statistics -------------------------------------------

struct XiStatistics {
    int k = 0;
    std::vector<double> x_ratio; // xi_1/xi_k
    std::vector<double> y;       // xi_k^{-1}/I_k
};

std::vector<XiStatistics> empirical_xi_statistics(const NetworkModel& model, const Scheme& scheme,
                                                  std::span<const int> ks, long long realizations,
                                                  std::uint64_t seed, int n_points = 400);

// ---- realization dumps -----------------------------------------------------

struct DeploymentSample {
    double window_side = 0.0;
    std::vector<std::array<double, 2>> bs_points;
    std::vector<std::array<double, 2>> user_points;
    std::vector<int> serving_map;     // user -> BS index, -1 if unscheduled
    std::vector<int> status;          // per BS: 0 idle, 1 serving, 2 muted
    std::vector<double> bs_shadowing; // toward the reference user
    int reference_user = -1;

    std::string to_json() const;
};

DeploymentSample sample_deployment(double alpha, double lambda_bs, double lambda_u,
                                   double sigma_db, int K, double window_side,
                                   std::uint64_t seed, std::uint64_t realization);

} // namespace cellcov
