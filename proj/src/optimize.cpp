#include "cellcov/optimize.hpp"

#include <cmath>
#include <cstdio>

#include "cellcov/analytic.hpp"

namespace cellcov {

AffineFit fit_affine_load(std::span<const std::pair<int, double>> table) {
    if (table.size() < 2)
        throw std::domain_error("fit_affine_load: need at least two (K, kappa) points");
    double mean_k = 0.0, mean_v = 0.0;
    for (const auto& [k, v] : table) {
        mean_k += k;
        mean_v += v;
    }
    mean_k /= static_cast<double>(table.size());
    mean_v /= static_cast<double>(table.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [k, v] : table) {
        sxx += (k - mean_k) * (k - mean_k);
        sxy += (k - mean_k) * (v - mean_v);
    }
    if (sxx == 0.0)
        throw std::domain_error("fit_affine_load: K values are degenerate");
    AffineFit fit;
    fit.eta1 = sxy / sxx;
    fit.eta0 = mean_v - fit.eta1 * mean_k;
    return fit;
}

AffineFit fit_affine_load(const LoadEstimate& estimate) {
    std::vector<std::pair<int, double>> table;
    table.reserve(estimate.per_k.size());
    for (const auto& e : estimate.per_k)
        table.emplace_back(e.K, e.kappa_hat);
    return fit_affine_load(table);
}

OptimizationResult optimize_throughput(double theta, Delta delta, const AffineFit& load_fit,
                                       int search_bound, std::optional<double> epsilon) {
    if (!(theta > 0.0))
        throw std::domain_error("optimize_throughput: theta must be positive");
    if (search_bound < 1)
        throw std::domain_error("optimize_throughput: search bound must be positive");
    if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0))
        throw std::domain_error("optimize_throughput: epsilon must lie in (0,1)");

    OptimizationResult best;
    best.theta = theta;
    best.constrained = epsilon.has_value();
    best.epsilon = epsilon;
    best.feasible = false;

    std::vector<double> joint(static_cast<std::size_t>(search_bound));
    for (int K = 1; K <= search_bound; ++K) {
        const double kappa = load_fit.predict(K);
        // joint coverage P(K,m) reused across every M via inclusion-exclusion
        for (int m = 1; m <= search_bound; ++m)
            joint[static_cast<std::size_t>(m - 1)] =
                joint_coverage_combined(theta, K, m, kappa, delta);
        for (int M = 1; M <= search_bound; ++M) {
            double coverage = 0.0;
            for (int m = 1; m <= M; ++m) {
                const double sign = (m % 2 == 1) ? 1.0 : -1.0;
                coverage += sign * binomial(M, m) * joint[static_cast<std::size_t>(m - 1)];
            }
            if (epsilon && coverage < 1.0 - *epsilon)
                continue;
            const double load = kappa * M;
            const double objective = coverage / load;
            bool better = false;
            if (!best.feasible) {
                better = true;
            } else if (objective > best.objective) {
                better = true;
            } else if (objective == best.objective) {
                const double best_load = best.kappa_used * best.m_star;
                better = load < best_load || (load == best_load && K < best.k_star);
            }
            if (better) {
                best.k_star = K;
                best.m_star = M;
                best.objective = objective;
                best.kappa_used = kappa;
                best.coverage = coverage;
                best.feasible = true;
            }
        }
    }
    return best;
}

std::vector<OptimizationResult> optimize_sweep(std::span<const double> theta_grid, Delta delta,
                                               const AffineFit& load_fit, int search_bound,
                                               std::optional<double> epsilon) {
    std::vector<OptimizationResult> rows;
    rows.reserve(theta_grid.size());
    for (double t : theta_grid)
        rows.push_back(optimize_throughput(t, delta, load_fit, search_bound, epsilon));
    return rows;
}

std::string sweep_to_csv(const std::vector<OptimizationResult>& rows) {
    std::string out = "# cellcov.optimize_sweep.v1\n";
    out += "theta_db,K_star,M_star,objective,kappa,feasible\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%.17g,%.17g,%d\n",
                      10.0 * std::log10(r.theta), r.k_star, r.m_star, r.objective, r.kappa_used,
                      r.feasible ? 1 : 0);
        out += buf;
    }
    return out;
}

} // namespace cellcov
