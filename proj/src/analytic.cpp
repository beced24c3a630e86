#include "cellcov/analytic.hpp"

#include <cmath>
#include <cstdio>

#include "cellcov/quadrature.hpp"
#include "json.hpp"

namespace cellcov {

namespace {

void check_theta(double theta) {
    if (!(theta > 0.0))
        throw std::domain_error("coverage: theta must be positive");
}

// (K-1) int_0^1 (1-u)^(K-2) g(theta * u^(1/delta)) du for K >= 2, the
// u = x^delta form of the coordination integrals. g is C^(-K) for coverage
// and 1 - C^(-K) for outage.
template <class G>
double coordination_integral(int K, double theta, Delta delta, G&& g) {
    const double inv_delta = 1.0 / delta.value();
    auto f = [&](double u) {
        return std::pow(1.0 - u, K - 2) * g(theta * std::pow(u, inv_delta));
    };
    return (K - 1) * integrate_checked(f, 0.0, 1.0);
}

} // namespace

double binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return std::round(r);
}

double laplace_rho_I(double s, double rho, const NetworkModel& model, double kappa) {
    if (!(s >= 0.0))
        throw std::domain_error("laplace_rho_I: s must be nonnegative");
    if (!(rho > 0.0))
        throw std::domain_error("laplace_rho_I: rho must be positive");
    if (!(kappa >= 1.0))
        throw std::domain_error("laplace_rho_I: kappa must be >= 1");
    const double c = interference_c(s, model.delta());
    return std::exp(-model.plps_intensity_coeff() / kappa * c * std::pow(rho, model.delta().value()));
}

double laplace_xi_k_I_k(double s, int k, double kappa, Delta delta) {
    if (k < 1)
        throw std::domain_error("laplace_xi_k_I_k: k must be a positive integer");
    return std::pow(c_kappa(s, 1, kappa, delta), -k);
}

double laplace_general_fading(double s, int k, double kappa, Delta delta,
                              const FadingExpectation& expect) {
    if (!(s >= 0.0))
        throw std::domain_error("laplace_general_fading: s must be nonnegative");
    if (k < 1)
        throw std::domain_error("laplace_general_fading: k must be a positive integer");
    if (!(kappa >= 1.0))
        throw std::domain_error("laplace_general_fading: kappa must be >= 1");
    const double d = delta.value();
    auto integrand = [&](double h) {
        const double sh = s * h;
        if (sh == 0.0)
            return 1.0;
        return std::exp(-sh) + std::pow(sh, d) * lower_incomplete_gamma(1.0 - d, sh);
    };
    const double e = expect(integrand);
    return std::pow(1.0 - 1.0 / kappa + e / kappa, -k);
}

double coverage_baseline(double theta, Delta delta) {
    check_theta(theta);
    return 1.0 / c_kappa(theta, 1, 1.0, delta);
}

double joint_coverage_icd(double theta, int M, Delta delta) {
    check_theta(theta);
    return 1.0 / c_kappa(theta, M, 1.0, delta);
}

double joint_coverage_combined(double theta, int K, int M, double kappa, Delta delta) {
    check_theta(theta);
    if (K < 1)
        throw std::domain_error("coverage: K must be a positive integer");
    // k=1 case of the interference Laplace transform; at kappa=1 this is
    // the plain joint-success probability over M RBs
    if (K == 1)
        return 1.0 / c_kappa(theta, M, kappa, delta);
    return coordination_integral(K, theta, delta, [&](double s) {
        return std::pow(c_kappa(s, M, kappa, delta), -K);
    });
}

double coverage_icic(double theta, int K, double kappa, Delta delta) {
    return joint_coverage_combined(theta, K, 1, kappa, delta);
}

double joint_outage_combined(double theta, int K, int M, double kappa, Delta delta) {
    check_theta(theta);
    if (K < 1)
        throw std::domain_error("outage: K must be a positive integer");
    if (K == 1) {
        const double g = c_kappa_minus_one(theta, M, kappa, delta);
        return g / (1.0 + g);
    }
    // 1 - C^(-K) = -expm1(-K log1p(C-1)), cancellation-free for small theta
    return coordination_integral(K, theta, delta, [&](double s) {
        const double g = c_kappa_minus_one(s, M, kappa, delta);
        return -std::expm1(-K * std::log1p(g));
    });
}

namespace {

template <class Joint>
double union_sum(int M, Joint&& joint) {
    if (M < 1)
        throw std::domain_error("coverage: M must be a positive integer");
    double sum = 0.0;
    for (int m = 1; m <= M; ++m) {
        const double sign = (m % 2 == 1) ? 1.0 : -1.0;
        sum += sign * binomial(M, m) * joint(m);
    }
    return sum;
}

} // namespace

double coverage_icd(double theta, int M, Delta delta) {
    return union_sum(M, [&](int m) { return joint_coverage_icd(theta, m, delta); });
}

double coverage_combined(double theta, int K, int M, double kappa, Delta delta) {
    return union_sum(M, [&](int m) { return joint_coverage_combined(theta, K, m, kappa, delta); });
}

double outage_combined(double theta, int K, int M, double kappa, Delta delta) {
    // 1 - sum (-1)^(m+1) C(M,m) P_m  ==  sum (-1)^(m+1) C(M,m) (1 - P_m)
    return union_sum(M, [&](int m) { return joint_outage_combined(theta, K, m, kappa, delta); });
}

CoverageCurve coverage_curve(const std::vector<double>& theta_grid,
                             int K, int M, double kappa, Delta delta) {
    CoverageCurve c;
    c.kind = CoverageCurve::Kind::analytic;
    c.theta_grid = theta_grid;
    c.values.reserve(theta_grid.size());
    for (double t : theta_grid)
        c.values.push_back(coverage_combined(t, K, M, kappa, delta));
    return c;
}

CoverageCurve coverage_curve(const CoverageQuery& query) {
    return coverage_curve(query.theta, query.scheme.K, query.scheme.M, query.scheme.kappa,
                          query.delta);
}

std::string CoverageCurve::to_csv() const {
    const bool with_ci = !ci_halfwidth.empty();
    std::string out = "# cellcov.coverage_curve.v1\n";
    out += with_ci ? "theta_db,theta_linear,value,ci_halfwidth\n"
                   : "theta_db,theta_linear,value\n";
    char buf[160];
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const double db = 10.0 * std::log10(theta_grid[i]);
        if (with_ci)
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n",
                          db, theta_grid[i], values[i], ci_halfwidth[i]);
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n",
                          db, theta_grid[i], values[i]);
        out += buf;
    }
    return out;
}

std::string CoverageCurve::to_json() const {
    nlohmann::json j;
    j["schema"] = "cellcov.coverage_curve.v1";
    j["kind"] = (kind == Kind::analytic) ? "analytic" : "empirical";
    j["theta"] = theta_grid;
    j["value"] = values;
    if (!ci_halfwidth.empty())
        j["ci_halfwidth"] = ci_halfwidth;
    return j.dump();
}

CoverageCurve CoverageCurve::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    CoverageCurve c;
    c.kind = (j.at("kind").get<std::string>() == "analytic") ? Kind::analytic : Kind::empirical;
    c.theta_grid = j.at("theta").get<std::vector<double>>();
    c.values = j.at("value").get<std::vector<double>>();
    if (j.contains("ci_halfwidth"))
        c.ci_halfwidth = j.at("ci_halfwidth").get<std::vector<double>>();
    return c;
}

} // namespace cellcov
