#include "cellcov/specfun.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "cellcov/quadrature.hpp"

namespace cellcov {

double rising_factorial(double x, int n) {
    if (n < 0)
        throw std::domain_error("rising_factorial: n must be nonnegative");
    double p = 1.0;
    for (int i = 0; i < n; ++i)
        p *= x + i;
    return p;
}

double upper_incomplete_beta(double x, double a, double b, double tol) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("upper_incomplete_beta: x outside [0,1]");
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("upper_incomplete_beta: a and b must be positive");
    if (x == 1.0)
        return 0.0;
    if (x == 0.0) // tail over the full range is the complete beta function
        return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));

    // u = (1-y)^b removes the (1-y)^(b-1) singularity at y = 1:
    //   int_x^1 y^(a-1)(1-y)^(b-1) dy = (1/b) int_0^{(1-x)^b} (1-u^{1/b})^{a-1} du
    auto upper_part = [&](double y_lo) {
        const double u_hi = std::pow(1.0 - y_lo, b);
        auto g = [&](double u) { return std::pow(1.0 - std::pow(u, 1.0 / b), a - 1.0); };
        return integrate_adaptive(g, 0.0, u_hi, tol) / b;
    };

    if (a >= 1.0 || x >= 0.5)
        return upper_part(x);

    // a < 1 makes y^(a-1) singular at 0; map the lower piece with v = y^a.
    auto lower = [&](double v) { return std::pow(1.0 - std::pow(v, 1.0 / a), b - 1.0); };
    const double lower_part =
        integrate_adaptive(lower, std::pow(x, a), std::pow(0.5, a), tol) / a;
    return lower_part + upper_part(0.5);
}

double lower_incomplete_gamma(double a, double x) {
    if (!(a > 0.0 && a < 1.0))
        throw std::domain_error("lower_incomplete_gamma: a must lie in (0,1)");
    if (!(x >= 0.0))
        throw std::domain_error("lower_incomplete_gamma: x must be nonnegative");
    if (x == 0.0)
        return 0.0;

    if (x < a + 1.0) {
        // series gamma(a,x) = x^a e^-x sum_n x^n / (a (a+1) ... (a+n))
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 500; ++n) {
            term *= x / (a + n);
            sum += term;
            if (term < 1e-17 * sum)
                break;
        }
        return std::exp(a * std::log(x) - x) * sum;
    }

    // modified Lentz continued fraction for the upper tail Gamma(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            break;
    }
    const double upper = std::exp(a * std::log(x) - x) * h;
    return std::tgamma(a) - upper;
}

double confluent_1f1(Delta delta, double x, double tol) {
    if (!std::isfinite(x))
        throw std::domain_error("confluent_1f1: non-finite argument");
    const double d = delta.value();
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 1000; ++n) {
        term *= (n - d) / ((n + 1.0 - d) * (n + 1.0)) * x;
        sum += term;
        if (std::abs(term) < tol * std::abs(sum) && n > 2)
            return sum;
    }
    return sum;
}

namespace {

// Enumerates nonnegative (b_1..b_L) with sum b_j = i and sum j*b_j = m,
// accumulating count(b) * prod x_j^{b_j}, where count(b) is the number of set
// partitions of [m] with b_j blocks of size j. Weights are kept exact in
// int64 arithmetic (valid through m = 20).
struct BellEnumerator {
    int m;
    std::span<const double> x;
    double total = 0.0;

    void recurse(int j, int parts_left, int weight_left, std::int64_t denom, double prod) {
        // denom accumulates prod b_j! * (j!)^{b_j}
        if (parts_left == 0) {
            if (weight_left == 0)
                total += static_cast<double>(factorial_i(m) / denom) * prod;
            return;
        }
        // remaining parts all have size >= j; this bound also keeps any used
        // part size within the m-i+1 entries of x
        if (static_cast<std::int64_t>(j) * parts_left > weight_left)
            return;
        const int max_b = std::min(weight_left / j, parts_left);
        const std::int64_t fj = factorial_i(j);
        for (int b = 0; b <= max_b; ++b) {
            std::int64_t d = denom * factorial_i(b);
            double p = prod;
            for (int t = 0; t < b; ++t) {
                d *= fj;
                p *= x[static_cast<std::size_t>(j - 1)];
            }
            recurse(j + 1, parts_left - b, weight_left - b * j, d, p);
        }
    }

    static std::int64_t factorial_i(int n) {
        std::int64_t f = 1;
        for (int i = 2; i <= n; ++i)
            f *= i;
        return f;
    }
};

} // namespace

double partial_bell(int m, int i, std::span<const double> x) {
    if (m < 1 || i < 1 || i > m)
        throw std::domain_error("partial_bell: need 1 <= i <= m");
    if (x.size() != static_cast<std::size_t>(m - i + 1))
        throw std::domain_error("partial_bell: argument sequence must have m-i+1 entries");
    if (m > 20)
        throw std::domain_error("partial_bell: m exceeds exact-weight bound");
    BellEnumerator e{m, x};
    e.recurse(1, i, m, 1, 1.0);
    return e.total;
}

namespace {

void check_ck_domain(double s, int m, double kappa) {
    if (!(s >= 0.0))
        throw std::domain_error("c_kappa: s must be nonnegative");
    if (m < 1)
        throw std::domain_error("c_kappa: m must be a positive integer");
    if (!(kappa >= 1.0))
        throw std::domain_error("c_kappa: kappa must be >= 1");
}

// 2F1(m,-d;1-d;-s) through the Pfaff transformation
//   (1+s)^d * 2F1(-d, 1-d-m; 1-d; s/(1+s)),
// whose argument z = s/(1+s) stays in [0,1) for every s >= 0. For n >= m all
// series factors are positive and the term ratio tends to z, which gives the
// geometric tail bound used for termination.
double c1_series(double s, int m, double d, double tol) {
    if (s == 0.0)
        return 1.0;
    const double z = s / (1.0 + s);
    double term = 1.0;
    double sum = 1.0;
    const double tail_factor = z / (1.0 - z);
    for (int n = 0; n < 2000000; ++n) {
        term *= (n - d) * (n + 1.0 - d - m) / ((n + 1.0 - d) * (n + 1.0)) * z;
        sum += term;
        if (n >= m && std::abs(term) * tail_factor < tol * std::abs(sum))
            return std::pow(1.0 + s, d) * sum;
    }
    throw QuadratureError("c_kappa series did not converge");
}

// Incomplete-beta representation of the Remark:
//   C_1(s,m) = (s+1)^-m + s^d * m * Bu_{1/(s+1)}(m+d, 1-d)
double c1_beta(double s, int m, double d, double tol) {
    if (s == 0.0)
        return 1.0;
    const double x = 1.0 / (s + 1.0);
    return std::pow(s + 1.0, -m) +
           std::pow(s, d) * m * upper_incomplete_beta(x, m + d, 1.0 - d, tol);
}

double fold_kappa(double c1, double kappa) {
    return (kappa - 1.0) / kappa + c1 / kappa;
}

} // namespace

double c_kappa_via_series(double s, int m, double kappa, Delta delta, double tol) {
    check_ck_domain(s, m, kappa);
    return fold_kappa(c1_series(s, m, delta.value(), tol), kappa);
}

double c_kappa_via_beta(double s, int m, double kappa, Delta delta, double tol) {
    check_ck_domain(s, m, kappa);
    return fold_kappa(c1_beta(s, m, delta.value(), tol), kappa);
}

double c_kappa(double s, int m, double kappa, Delta delta, double tol) {
    check_ck_domain(s, m, kappa);
    if (s == 0.0)
        return 1.0;
    const double d = delta.value();
    const double c1 = (s <= 1.0) ? c1_series(s, m, d, tol) : c1_beta(s, m, d, tol);
    return fold_kappa(c1, kappa);
}

double c_kappa_minus_one(double s, int m, double kappa, Delta delta, double tol) {
    check_ck_domain(s, m, kappa);
    if (s == 0.0)
        return 0.0;
    const double d = delta.value();
    if (s <= 0.5) {
        // defining series minus its leading 1; converges geometrically here
        double term = 1.0;
        double sum = 0.0;
        for (int n = 0; n < 10000; ++n) {
            term *= (m + n) * (n - d) / ((n + 1.0 - d) * (n + 1.0)) * (-s);
            sum += term;
            if (std::abs(term) < tol * std::max(std::abs(sum), 1e-300) && n > 2)
                break;
        }
        return sum / kappa;
    }
    return (c_kappa(s, m, 1.0, delta, tol) - 1.0) / kappa;
}

double interference_c(double s, Delta delta, double tol) {
    return c_kappa_minus_one(s, 1, 1.0, delta, tol);
}

} // namespace cellcov
