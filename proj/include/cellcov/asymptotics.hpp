#pragma once

#include <span>
#include <string>
#include <vector>

#include "cellcov/analytic.hpp"
#include "cellcov/specfun.hpp"

namespace cellcov {

// Thrown by the diversity slope estimator when the curve does not span a
// usable decade of small-theta outage.
class InsufficientRangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AsymptoticCoefficient {
    enum class Regime { high_reliability, high_spectral_efficiency };
    enum class Axis { K, M, combined };

    Regime regime;
    Axis axis;
    int index;       // the K or M it belongs to
    double kappa;    // 1 for the M axis
    double delta;
    double value;
    double order;    // exponent of theta in the asymptote
};

// Outage ~ a_K * theta with a_K = (1/kappa) K!/((1+1/delta)_{K-1}) delta/(1-delta).
double coeff_a_K(int K, double kappa, Delta delta);

// Coverage ~ b_K theta^(-delta) with
// b_K = (K-1) int_0^inf delta x^(delta-1) C_kappa(x,1)^(-K) dx, K >= 2.
double coeff_b_K(int K, double kappa, Delta delta);

// Outage ~ a_M theta^M; Bell-polynomial form of the M-th derivative of
// 1/1F1(-delta;1-delta;x) at 0, using tau_bar(j) = (-delta)_j/(1-delta)_j.
double coeff_a_M(int M, Delta delta);

// Same value through the Faa di Bruno partition sum; an independent route
// kept public for triangulation.
double coeff_a_M_partition(int M, Delta delta);

// Coverage ~ b_M theta^(-delta) with
// b_M = sum_m (-1)^(m+1) C(M,m) Gamma(m)/(Gamma(1-delta) Gamma(m+delta)).
double coeff_b_M(int M, Delta delta);

// n-th derivative at 0 of 1/C_1(x,m) via the partition sum over
// {(b_i): sum i*b_i = n}; exact integer weights, n <= 12.
double faa_di_bruno_coeff(int n, int m, Delta delta);

// sum_{m=1}^M C(M,m) (-1)^(m+A) prod_i (m)_{k_i} with A = sum k_i >= 1.
// Exact integer arithmetic; equals 0 for A < M and M! for A = M.
long long pochhammer_identity(int M, std::span<const int> k);

// Least-squares slope of log(outage) against log(theta) over the smallest
// decade of the curve; the empirical diversity order.
double diversity_order_estimate(const CoverageCurve& curve);

// Numerical stand-in for the combined-scheme coefficient a(K,M), which has
// no closed form: (1 - coverage)/theta^M evaluated at small theta.
double coeff_a_KM_empirical(int K, int M, double kappa, Delta delta, double theta = 1e-3);

// CSV emission: K_or_M,kappa,delta,regime,value with axis-tagged first column
// (e.g. "K3", "M2").
std::string coefficients_to_csv(const std::vector<AsymptoticCoefficient>& rows);

} // namespace cellcov
