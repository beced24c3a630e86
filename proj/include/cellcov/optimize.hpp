#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cellcov/montecarlo.hpp"
#include "cellcov/specfun.hpp"

namespace cellcov {

struct OptimizationResult {
    double theta = 0.0; // linear
    int k_star = 0;
    int m_star = 0;
    double objective = 0.0; // coverage / (kappa * M)
    double kappa_used = 0.0;
    double coverage = 0.0;
    bool constrained = false;
    std::optional<double> epsilon;
    bool feasible = true; // false only when the constraint excludes the whole grid
};

// Least-squares affine load fit kappa(K) = eta0 + eta1*K over (K, kappa_hat)
// pairs; predictions are clamped below at 1.
AffineFit fit_affine_load(std::span<const std::pair<int, double>> table);
AffineFit fit_affine_load(const LoadEstimate& estimate);

// Exhaustive scan of (K,M) in [1..bound]^2 maximizing coverage/(kappa*M) with
// kappa = max(1, eta0 + eta1*K). With epsilon set, cells with coverage below
// 1-epsilon are infeasible. Ties break toward the smaller kappa*M load, then
// the smaller K.
OptimizationResult optimize_throughput(double theta, Delta delta, const AffineFit& load_fit,
                                       int search_bound = 20,
                                       std::optional<double> epsilon = std::nullopt);

// theta sweep; csv: theta_db,K_star,M_star,objective,kappa,feasible
std::vector<OptimizationResult> optimize_sweep(std::span<const double> theta_grid, Delta delta,
                                               const AffineFit& load_fit, int search_bound = 20,
                                               std::optional<double> epsilon = std::nullopt);
std::string sweep_to_csv(const std::vector<OptimizationResult>& rows);

} // namespace cellcov
