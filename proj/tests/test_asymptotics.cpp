#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "cellcov/asymptotics.hpp"
#include "oracle.hpp"

using namespace cellcov;
using std::numbers::pi;

namespace {
const Delta kHalf(0.5);

// b_2 at kappa=1, delta=1/2, frozen from the two-segment tanh-sinh oracle
// (K-1) int_0^inf (1 + t atan t)^-K dt before the implementation.
constexpr double kB2 = 1.044150563882533;
constexpr double kB3 = 1.355072816735619;
} // namespace

TEST_CASE("a_K closed form") {
    CHECK(coeff_a_K(1, 1.0, kHalf) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(coeff_a_K(2, 1.0, kHalf) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(coeff_a_K(1, 2.0, kHalf) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(coeff_a_K(3, 2.0, kHalf) < coeff_a_K(3, 1.0, kHalf)); // decreasing in kappa
    CHECK_THROWS_AS(coeff_a_K(0, 1.0, kHalf), std::domain_error);
}

TEST_CASE("b_K: frozen oracle values and orderings") {
    CHECK(coeff_b_K(2, 1.0, kHalf) == doctest::Approx(kB2).epsilon(1e-8));
    CHECK(coeff_b_K(3, 1.0, kHalf) == doctest::Approx(kB3).epsilon(1e-8));
    CHECK(coeff_b_K(3, 1.0, kHalf) > coeff_b_K(2, 1.0, kHalf));
    CHECK(coeff_b_K(2, 2.0, kHalf) > coeff_b_K(2, 1.0, kHalf));
    CHECK_THROWS_AS(coeff_b_K(1, 1.0, kHalf), std::domain_error);
}

TEST_CASE("a_M: Bell form against pinned values") {
    CHECK(coeff_a_M(1, kHalf) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(coeff_a_M(2, kHalf) == doctest::Approx(7.0 / 3.0).epsilon(1e-13));
    CHECK(coeff_a_M(3, kHalf) == doctest::Approx(8.2).epsilon(1e-13));
}

TEST_CASE("a_M triangulation: Bell, partition sum, finite differences") {
    for (double d : {0.3, 0.5, 0.7}) {
        Delta delta(d);
        for (int M = 1; M <= 6; ++M) {
            const double bell = coeff_a_M(M, delta);
            const double part = coeff_a_M_partition(M, delta);
            const double fd = oracle::fd_inverse_confluent_derivative(M, d);
            CHECK(std::abs(bell - part) <= 1e-12 * std::abs(bell));
            CHECK(std::abs(bell - fd) <= 1e-6 * std::abs(bell));
        }
    }
}

TEST_CASE("b_M closed form") {
    CHECK(coeff_b_M(1, kHalf) == doctest::Approx(2.0 / pi).epsilon(1e-12));
    CHECK(coeff_b_M(2, kHalf) == doctest::Approx(8.0 / (3.0 * pi)).epsilon(1e-12));
    double prev = 0.0;
    for (int M = 1; M <= 5; ++M) {
        const double b = coeff_b_M(M, kHalf);
        CHECK(b > prev);
        prev = b;
    }
    // b_K dominates b_M at the same index for delta = 1/2
    CHECK(coeff_b_K(2, 1.0, kHalf) > coeff_b_M(2, kHalf));
    CHECK(coeff_b_K(3, 1.0, kHalf) > coeff_b_M(3, kHalf));
}

TEST_CASE("Faa di Bruno derivative coefficients") {
    CHECK(faa_di_bruno_coeff(1, 1, kHalf) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(faa_di_bruno_coeff(1, 2, kHalf) == doctest::Approx(-2.0).epsilon(1e-14));
    // Taylor reconstruction of 1/C_1(x,m) at x = 0.01
    const double x = 0.01;
    for (int m : {1, 2, 3}) {
        double taylor = 1.0; // 1/C_1(0,m) = 1
        double xfact = 1.0;
        for (int n = 1; n <= 6; ++n) {
            xfact *= x / n;
            taylor += faa_di_bruno_coeff(n, m, kHalf) * xfact;
        }
        const double direct = 1.0 / c_kappa(x, m, 1.0, kHalf);
        CHECK(std::abs(taylor - direct) < 1e-10);
    }
    CHECK_THROWS_AS(faa_di_bruno_coeff(13, 1, kHalf), std::domain_error);
}

TEST_CASE("Pochhammer product identity") {
    {
        const int k[] = {1, 1};
        CHECK(pochhammer_identity(3, k) == 0);
    }
    {
        const int k[] = {2};
        CHECK(pochhammer_identity(2, k) == 2);
    }
    {
        const int k[] = {1, 1, 1, 1};
        CHECK(pochhammer_identity(4, k) == 24);
    }
    // exhaustive over compositions with up to 4 parts, M <= 6
    auto factorial = [](int n) {
        long long f = 1;
        for (int i = 2; i <= n; ++i)
            f *= i;
        return f;
    };
    for (int M = 1; M <= 6; ++M) {
        for (int k1 = 0; k1 <= M; ++k1)
            for (int k2 = 0; k2 <= M; ++k2)
                for (int k3 = 0; k3 <= M; ++k3)
                    for (int k4 = 0; k4 <= M; ++k4) {
                        const int a = k1 + k2 + k3 + k4;
                        if (a < 1 || a > M)
                            continue;
                        const int k[] = {k1, k2, k3, k4};
                        const long long got = pochhammer_identity(M, k);
                        if (a < M)
                            CHECK(got == 0);
                        else
                            CHECK(got == factorial(M));
                    }
    }
}

TEST_CASE("diversity order estimates") {
    auto curve_for = [](int K, int M) {
        CoverageCurve c;
        c.kind = CoverageCurve::Kind::analytic;
        for (int i = 0; i <= 12; ++i) {
            const double t = 1e-4 * std::pow(10.0, i / 12.0);
            c.theta_grid.push_back(t);
            c.values.push_back(1.0 - outage_combined(t, K, M, 1.0, kHalf));
        }
        return c;
    };
    CHECK(diversity_order_estimate(curve_for(1, 1)) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(diversity_order_estimate(curve_for(1, 2)) == doctest::Approx(2.0).epsilon(0.025));
    CHECK(diversity_order_estimate(curve_for(3, 2)) == doctest::Approx(2.0).epsilon(0.025));
    CHECK(diversity_order_estimate(curve_for(5, 1)) == doctest::Approx(1.0).epsilon(0.02));

    // less than a decade of thetas
    CoverageCurve narrow;
    narrow.theta_grid = {1e-3, 2e-3, 4e-3};
    narrow.values = {0.999, 0.998, 0.996};
    CHECK_THROWS_AS(diversity_order_estimate(narrow), InsufficientRangeError);

    // outage underflows the numerical floor
    CoverageCurve floored;
    for (int i = 0; i <= 12; ++i) {
        floored.theta_grid.push_back(1e-9 * std::pow(10.0, i / 12.0));
        floored.values.push_back(1.0);
    }
    CHECK_THROWS_AS(diversity_order_estimate(floored), InsufficientRangeError);
}

TEST_CASE("high-reliability asymptotes at theta = 1e-3") {
    const double theta = 1e-3;
    for (int K = 1; K <= 5; ++K) {
        for (double kappa : {1.0, static_cast<double>(K)}) {
            const double outage = outage_combined(theta, K, 1, kappa, kHalf);
            const double a = coeff_a_K(K, kappa, kHalf);
            CHECK(std::abs(outage / (a * theta) - 1.0) < 0.05);
        }
    }
    for (int M = 1; M <= 5; ++M) {
        const double outage = outage_combined(theta, 1, M, 1.0, kHalf);
        const double a = coeff_a_M(M, kHalf);
        CHECK(std::abs(outage / (a * std::pow(theta, M)) - 1.0) < 0.05);
    }
}

TEST_CASE("high-spectral-efficiency asymptotes at theta = 1e3") {
    const double theta = 1e3;
    const double scale = std::pow(theta, 0.5);
    for (int K = 2; K <= 5; ++K) {
        const double cov = coverage_icic(theta, K, 1.0, kHalf);
        CHECK(std::abs(cov * scale / coeff_b_K(K, 1.0, kHalf) - 1.0) < 0.05);
    }
    for (int M = 1; M <= 5; ++M) {
        const double cov = coverage_icd(theta, M, kHalf);
        CHECK(std::abs(cov * scale / coeff_b_M(M, kHalf) - 1.0) < 0.05);
    }
}

TEST_CASE("cross-formula equality a_M(1) = a_K(1,1)") {
    for (int i = 1; i <= 9; ++i) {
        Delta d(0.1 * i);
        CHECK(coeff_a_M(1, d) == doctest::Approx(coeff_a_K(1, 1.0, d)).epsilon(1e-15));
    }
}

TEST_CASE("a_K trend in the path loss exponent") {
    for (int K = 1; K <= 5; ++K) {
        double prev = std::numeric_limits<double>::infinity();
        for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
            const double a = coeff_a_K(K, 1.0, Delta::from_alpha(alpha));
            CHECK(a < prev);
            prev = a;
        }
    }
    // ICIC is more useful at larger alpha: a_1/a_K grows with alpha
    for (int K : {2, 3, 5}) {
        double prev_ratio = 0.0;
        for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
            Delta d = Delta::from_alpha(alpha);
            const double ratio = coeff_a_K(1, 1.0, d) / coeff_a_K(K, 1.0, d);
            CHECK(ratio > prev_ratio);
            prev_ratio = ratio;
        }
    }
}

TEST_CASE("empirical combined coefficient a(K,M)") {
    for (int K = 1; K <= 3; ++K)
        for (int M = 1; M <= 3; ++M)
            CHECK(coeff_a_KM_empirical(K, M, 1.0, kHalf) > 0.0);
    // reduces to a_M at K = 1 up to the O(theta) correction
    for (int M = 1; M <= 3; ++M)
        CHECK(coeff_a_KM_empirical(1, M, 1.0, kHalf) ==
              doctest::Approx(coeff_a_M(M, kHalf)).epsilon(0.05));
}

TEST_CASE("coefficient CSV emission") {
    std::vector<AsymptoticCoefficient> rows;
    rows.push_back({AsymptoticCoefficient::Regime::high_spectral_efficiency,
                    AsymptoticCoefficient::Axis::M, 1, 1.0, 0.5, coeff_b_M(1, kHalf), -0.5});
    rows.push_back({AsymptoticCoefficient::Regime::high_reliability,
                    AsymptoticCoefficient::Axis::K, 2, 1.0, 0.5, coeff_a_K(2, 1.0, kHalf), 1.0});
    const std::string csv = coefficients_to_csv(rows);
    CHECK(csv.find("K_or_M,kappa,delta,regime,value\n") != std::string::npos);
    CHECK(csv.find("M1,1,0.5,high_spectral_efficiency,0.63661977236758") != std::string::npos);
    CHECK(csv.find("K2,1,0.5,high_reliability,0.66666666666666") != std::string::npos);
}
