#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cellcov {

// Thrown when an adaptive rule cannot reach the requested tolerance.
// Non-convergence is always surfaced, never silently degraded.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Nodes and weights of an n-point Gauss-Legendre rule on [-1,1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached rule lookup; rules are computed once per order (Newton on P_n).
const GaussRule& gauss_legendre(int n);

template <class F>
double integrate_gauss(F&& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

namespace detail {

template <class F>
double adaptive_step(F& f, double a, double b, double tol,
                     const GaussRule& lo, const GaussRule& hi, int depth) {
    const double coarse = integrate_gauss(f, a, b, lo);
    const double fine = integrate_gauss(f, a, b, hi);
    const double err = std::abs(fine - coarse);
    if (err <= tol || err <= 1e-16 * std::abs(fine))
        return fine;
    if (depth <= 0)
        throw QuadratureError("adaptive quadrature failed to converge");
    const double mid = 0.5 * (a + b);
    return adaptive_step(f, a, mid, 0.5 * tol, lo, hi, depth - 1) +
           adaptive_step(f, mid, b, 0.5 * tol, lo, hi, depth - 1);
}

} // namespace detail

// Adaptive integration on [a,b] with an embedded 15/31-point Gauss pair.
// tol is treated as an absolute tolerance on the whole interval; a relative
// floor near machine precision is applied per panel.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol = 1e-12, int max_depth = 48) {
    if (!(a <= b))
        throw std::domain_error("integrate_adaptive: inverted interval");
    if (a == b)
        return 0.0;
    const GaussRule& lo = gauss_legendre(15);
    const GaussRule& hi = gauss_legendre(31);
    return detail::adaptive_step(f, a, b, tol, lo, hi, max_depth);
}

// Fixed 64-node evaluation checked against 128 nodes; escalates to adaptive
// subdivision when the two disagree by more than disagree_tol.
template <class F>
double integrate_checked(F&& f, double a, double b,
                         double disagree_tol = 1e-9, double adaptive_tol = 1e-12) {
    const double v64 = integrate_gauss(f, a, b, gauss_legendre(64));
    const double v128 = integrate_gauss(f, a, b, gauss_legendre(128));
    if (std::abs(v128 - v64) <= std::max(1e-15, disagree_tol * std::abs(v128)))
        return v128;
    return integrate_adaptive(std::forward<F>(f), a, b,
                              std::max(adaptive_tol * std::abs(v128), 1e-15));
}

} // namespace cellcov
