#pragma once

#include <span>
#include <stdexcept>

namespace cellcov {

// delta = 2/alpha, constrained to (0,1); all coverage formulas are
// parameterized by it rather than by the path loss exponent directly.
class Delta {
public:
    static Delta from_alpha(double alpha) {
        if (!(alpha > 2.0))
            throw std::domain_error("Delta: path loss exponent must exceed 2");
        return Delta(2.0 / alpha);
    }

    explicit Delta(double value) : value_(value) {
        if (!(value > 0.0 && value < 1.0))
            throw std::domain_error("Delta: value must lie in (0,1)");
    }

    double value() const { return value_; }
    double alpha() const { return 2.0 / value_; }

private:
    double value_;
};

// Pochhammer rising factorial (x)_n = x(x+1)...(x+n-1); empty product is 1.
double rising_factorial(double x, int n);

// Upper incomplete beta B^u_x(a,b) = int_x^1 y^(a-1) (1-y)^(b-1) dy.
// Requires 0 <= x <= 1, a > 0, b > 0. Evaluated by adaptive quadrature after
// substitutions that remove both endpoint singularities.
double upper_incomplete_beta(double x, double a, double b, double tol = 1e-12);

// Lower incomplete gamma for 0 < a < 1, x >= 0; tends to Gamma(a) as x -> inf.
double lower_incomplete_gamma(double a, double x);

// Kummer's 1F1(-delta; 1-delta; x), the fixed parameter pattern used by the
// high-reliability diversity coefficient.
double confluent_1f1(Delta delta, double x, double tol = 1e-14);

// Partial exponential Bell polynomial Bell_{m,i}(x_1,...,x_{m-i+1}),
// evaluated by enumerating the integer partitions of m into i parts.
double partial_bell(int m, int i, std::span<const double> x);

// C_kappa(s,m) = (kappa-1)/kappa + (1/kappa) 2F1(m,-delta;1-delta;-s).
// Equals 1 at s = 0, strictly increasing in s and m. The production path
// uses the transformed series for s <= 1 and the incomplete-beta
// representation for s > 1; both standalone paths are exposed so they can be
// cross-checked on the full domain.
double c_kappa(double s, int m, double kappa, Delta delta, double tol = 1e-12);
double c_kappa_via_series(double s, int m, double kappa, Delta delta, double tol = 1e-12);
double c_kappa_via_beta(double s, int m, double kappa, Delta delta, double tol = 1e-12);

// C_kappa(s,m) - 1 without cancellation for small s; the outage formulas in
// the high-reliability regime depend on this staying accurate as s -> 0.
double c_kappa_minus_one(double s, int m, double kappa, Delta delta, double tol = 1e-12);

// C(s) = C_1(s,1) - 1 = s*delta/(1-delta) 2F1(1,1-delta;2-delta;-s);
// the exponent of the Laplace transform of the scaled PLPS interference.
double interference_c(double s, Delta delta, double tol = 1e-12);

} // namespace cellcov
