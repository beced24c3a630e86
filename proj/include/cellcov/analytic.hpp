#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cellcov/model.hpp"
#include "cellcov/specfun.hpp"

namespace cellcov {

// A coverage request: threshold grid (linear scale) plus scheme parameters.
struct CoverageQuery {
    std::vector<double> theta; // ascending, > 0 elementwise
    Scheme scheme;
    Delta delta;

    CoverageQuery(std::vector<double> theta_, Scheme scheme_, Delta delta_)
        : theta(std::move(theta_)), scheme(scheme_), delta(delta_) {
        for (double t : theta)
            if (!(t > 0.0))
                throw std::domain_error("CoverageQuery: theta must be positive");
    }
};

// A theta grid with coverage values; the common exchange type between the
// analytic formulas, the simulator and the CSV/JSON emitters.
struct CoverageCurve {
    enum class Kind { analytic, empirical };

    std::vector<double> theta_grid;     // linear scale, ascending
    std::vector<double> values;
    Kind kind = Kind::analytic;
    std::vector<double> ci_halfwidth;   // empty unless empirical

    // header: theta_db,theta_linear,value[,ci_halfwidth]
    std::string to_csv() const;
    std::string to_json() const;
    static CoverageCurve from_json(const std::string& text);
};

// Laplace transform of rho*I_rho: exp(-(lambda/kappa) pi E[S^delta] C(s) rho^delta).
double laplace_rho_I(double s, double rho, const NetworkModel& model, double kappa);

// Laplace transform of xi_k I_k: C_kappa(s,1)^(-k).
double laplace_xi_k_I_k(double s, int k, double kappa, Delta delta);

// Expectation operator over the fading law H, supplied by the caller:
// given f, returns E[f(H)].
using FadingExpectation = std::function<double(const std::function<double(double)>&)>;

// General-fading Laplace transform of xi_k I^H_k:
// (1 - 1/kappa + (1/kappa) E_H[e^{-sH} + (sH)^delta gamma(1-delta, sH)])^(-k).
double laplace_general_fading(double s, int k, double kappa, Delta delta,
                              const FadingExpectation& expect);

// Coverage probabilities. K = 1 and M = 1 cases dispatch to their closed
// forms; K >= 2 evaluates the finite coordination integral
// after the substitution u = x^delta, which makes the integrand smooth.
double coverage_baseline(double theta, Delta delta);
double coverage_icic(double theta, int K, double kappa, Delta delta);
double joint_coverage_icd(double theta, int M, Delta delta);
double coverage_icd(double theta, int M, Delta delta);
double joint_coverage_combined(double theta, int K, int M, double kappa, Delta delta);
double coverage_combined(double theta, int K, int M, double kappa, Delta delta);

// Outage counterparts evaluated without forming 1 - coverage, so they stay
// accurate deep in the high-reliability regime (outage ~ theta^M).
double joint_outage_combined(double theta, int K, int M, double kappa, Delta delta);
double outage_combined(double theta, int K, int M, double kappa, Delta delta);

// Analytic curve over a theta grid.
CoverageCurve coverage_curve(const CoverageQuery& query);
CoverageCurve coverage_curve(const std::vector<double>& theta_grid,
                             int K, int M, double kappa, Delta delta);

// Exact binomial coefficient for the inclusion-exclusion sums.
double binomial(int n, int k);

} // namespace cellcov
