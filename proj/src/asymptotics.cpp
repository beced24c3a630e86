#include "cellcov/asymptotics.hpp"

#include <cmath>
#include <cstdio>

#include "cellcov/quadrature.hpp"

namespace cellcov {

double coeff_a_K(int K, double kappa, Delta delta) {
    if (K < 1)
        throw std::domain_error("coeff_a_K: K must be a positive integer");
    if (!(kappa >= 1.0))
        throw std::domain_error("coeff_a_K: kappa must be >= 1");
    const double d = delta.value();
    double k_fact = 1.0;
    for (int i = 2; i <= K; ++i)
        k_fact *= i;
    return (1.0 / kappa) * k_fact / rising_factorial(1.0 + 1.0 / d, K - 1) * d / (1.0 - d);
}

double coeff_b_K(int K, double kappa, Delta delta) {
    if (K < 2)
        throw std::domain_error("coeff_b_K: K must be >= 2 (use coeff_b_M(1,.) for K=1)");
    if (!(kappa >= 1.0))
        throw std::domain_error("coeff_b_K: kappa must be >= 1");
    const double d = delta.value();
    // head: int_0^1 delta x^(delta-1) C^-K dx, with u = x^delta
    auto head = [&](double u) {
        return std::pow(c_kappa(std::pow(u, 1.0 / d), 1, kappa, delta), -K);
    };
    // tail mapped by w = x^(-delta) onto (0,1]:
    //   int_1^inf delta x^(delta-1) C^-K dx = int_0^1 w^(K-2) / g(w)^K dw,
    // g(w) = w C_kappa(w^(-1/delta), 1) -> Gamma(1+d)Gamma(1-d)/kappa as w -> 0,
    // so the transformed integrand is bounded for K >= 2.
    const double g0 = std::tgamma(1.0 + d) * std::tgamma(1.0 - d);
    auto tail = [&](double w) {
        double g;
        if (w < 1e-6) {
            // w/(x+1) and the truncated beta head are O(w^(1+1/d)) here
            g = (g0 + (kappa - 1.0) * w) / kappa;
        } else {
            g = w * c_kappa(std::pow(w, -1.0 / d), 1, kappa, delta);
        }
        return std::pow(w, K - 2) / std::pow(g, K);
    };
    const double value = integrate_checked(head, 0.0, 1.0) + integrate_checked(tail, 0.0, 1.0);
    return (K - 1) * value;
}

namespace {

double tau_bar(int j, double d) {
    return rising_factorial(-d, j) / rising_factorial(1.0 - d, j);
}

} // namespace

double coeff_a_M(int M, Delta delta) {
    if (M < 1)
        throw std::domain_error("coeff_a_M: M must be a positive integer");
    const double d = delta.value();
    double sum = 0.0;
    double i_fact = 1.0;
    for (int i = 1; i <= M; ++i) {
        i_fact *= i;
        std::vector<double> x(static_cast<std::size_t>(M - i + 1));
        for (int j = 1; j <= M - i + 1; ++j)
            x[static_cast<std::size_t>(j - 1)] = tau_bar(j, d);
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        sum += sign * i_fact * partial_bell(M, i, x);
    }
    return sum;
}

namespace {

// Enumerates (b_1..b_n) with sum i*b_i = n, calling visit(count, j, prod)
// where count = n!/(prod b_i! (i!)^{b_i}) is the set-partition count,
// j = sum b_i, and prod = prod term(i)^{b_i}.
template <class Term, class Visit>
void for_each_partition(int n, Term&& term, Visit&& visit) {
    struct Rec {
        int n;
        const Term& term;
        const Visit& visit;
        void go(int i, int weight_left, long long denom, int j, double prod) {
            if (weight_left == 0) {
                visit(factorial(n) / denom, j, prod);
                return;
            }
            if (i > weight_left)
                return;
            long long fi = factorial(i);
            long long d = denom;
            double p = prod;
            for (int b = 0; b * i <= weight_left; ++b) {
                if (b > 0) {
                    d = d / factorial(b - 1) * factorial(b);
                    d *= fi;
                    p *= term(i);
                }
                go(i + 1, weight_left - b * i, d, j + b, p);
            }
        }
        static long long factorial(int v) {
            long long f = 1;
            for (int t = 2; t <= v; ++t)
                f *= t;
            return f;
        }
    };
    Rec rec{n, term, visit};
    rec.go(1, n, 1, 0, 1.0);
}

} // namespace

double coeff_a_M_partition(int M, Delta delta) {
    if (M < 1 || M > 12)
        throw std::domain_error("coeff_a_M_partition: M must lie in 1..12");
    const double d = delta.value();
    double sum = 0.0;
    for_each_partition(
        M, [&](int i) { return tau_bar(i, d); },
        [&](long long count, int j, double prod) {
            double jf = 1.0;
            for (int t = 2; t <= j; ++t)
                jf *= t;
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            sum += static_cast<double>(count) * sign * jf * prod;
        });
    return sum;
}

double faa_di_bruno_coeff(int n, int m, Delta delta) {
    if (n < 1 || n > 12)
        throw std::domain_error("faa_di_bruno_coeff: n must lie in 1..12");
    if (m < 1)
        throw std::domain_error("faa_di_bruno_coeff: m must be a positive integer");
    const double d = delta.value();
    double sum = 0.0;
    for_each_partition(
        n, [&](int i) { return rising_factorial(m, i) * tau_bar(i, d); },
        [&](long long count, int j, double prod) {
            double jf = 1.0;
            for (int t = 2; t <= j; ++t)
                jf *= t;
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            sum += static_cast<double>(count) * sign * jf * prod;
        });
    const double outer_sign = (n % 2 == 0) ? 1.0 : -1.0;
    return outer_sign * sum;
}

double coeff_b_M(int M, Delta delta) {
    if (M < 1)
        throw std::domain_error("coeff_b_M: M must be a positive integer");
    const double d = delta.value();
    double sum = 0.0;
    for (int m = 1; m <= M; ++m) {
        const double sign = (m % 2 == 1) ? 1.0 : -1.0;
        const double g = std::exp(std::lgamma(m) - std::lgamma(1.0 - d) - std::lgamma(m + d));
        sum += sign * binomial(M, m) * g;
    }
    return sum;
}

long long pochhammer_identity(int M, std::span<const int> k) {
    if (M < 1)
        throw std::domain_error("pochhammer_identity: M must be a positive integer");
    long long a = 0;
    for (int ki : k) {
        if (ki < 0)
            throw std::domain_error("pochhammer_identity: k entries must be nonnegative");
        a += ki;
    }
    if (a < 1)
        throw std::domain_error("pochhammer_identity: sum of k must be >= 1");

    auto choose = [](int n, int r) {
        long long v = 1;
        for (int i = 1; i <= r; ++i)
            v = v * (n - r + i) / i;
        return v;
    };
    long long sum = 0;
    for (int m = 1; m <= M; ++m) {
        long long prod = choose(M, m);
        for (int ki : k)
            for (int t = 0; t < ki; ++t)
                prod *= m + t;
        const bool negative = ((m + a) % 2) != 0;
        sum += negative ? -prod : prod;
    }
    return sum;
}

double diversity_order_estimate(const CoverageCurve& curve) {
    if (curve.theta_grid.size() < 3)
        throw InsufficientRangeError("diversity estimate: need at least 3 grid points");
    const double lo = curve.theta_grid.front();
    const double hi = 10.0 * lo;
    if (curve.theta_grid.back() < hi * (1.0 - 1e-12))
        throw InsufficientRangeError("diversity estimate: curve spans less than a decade");

    constexpr double floor10 = 1e-14; // 10x the double-precision outage floor
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < curve.theta_grid.size(); ++i) {
        const double t = curve.theta_grid[i];
        if (t > hi * (1.0 + 1e-12))
            break;
        const double outage = 1.0 - curve.values[i];
        if (!(outage > floor10))
            throw InsufficientRangeError("diversity estimate: outage below numerical floor");
        lx.push_back(std::log(t));
        ly.push_back(std::log(outage));
    }
    if (lx.size() < 3)
        throw InsufficientRangeError("diversity estimate: too few points in the first decade");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

double coeff_a_KM_empirical(int K, int M, double kappa, Delta delta, double theta) {
    return outage_combined(theta, K, M, kappa, delta) / std::pow(theta, M);
}

std::string coefficients_to_csv(const std::vector<AsymptoticCoefficient>& rows) {
    std::string out = "# cellcov.asymptotic_coefficients.v1\n";
    out += "K_or_M,kappa,delta,regime,value\n";
    char buf[160];
    for (const auto& r : rows) {
        const char axis = (r.axis == AsymptoticCoefficient::Axis::K) ? 'K' : 'M';
        const char* regime = (r.regime == AsymptoticCoefficient::Regime::high_reliability)
                                 ? "high_reliability"
                                 : "high_spectral_efficiency";
        std::snprintf(buf, sizeof buf, "%c%d,%.17g,%.17g,%s,%.17g\n",
                      axis, r.index, r.kappa, r.delta, regime, r.value);
        out += buf;
    }
    return out;
}

} // namespace cellcov
