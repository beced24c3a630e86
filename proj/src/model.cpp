#include "cellcov/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace cellcov {

namespace {
constexpr double kLn10Over10 = 0.23025850929940457; // ln(10)/10
}

ShadowingSpec ShadowingSpec::lognormal_db(double sigma_db) {
    if (!(sigma_db >= 0.0))
        throw std::domain_error("ShadowingSpec: sigma_dB must be nonnegative");
    return {Kind::lognormal, sigma_db};
}

double ShadowingSpec::delta_moment(Delta delta) const {
    if (kind == Kind::degenerate)
        return 1.0;
    const double t = delta.value() * sigma_db * kLn10Over10;
    return std::exp(0.5 * t * t);
}

double ShadowingSpec::sample(CounterRng& rng) const {
    if (kind == Kind::degenerate)
        return 1.0;
    return std::exp(kLn10Over10 * sigma_db * rng.normal());
}

double ShadowingSpec::sample_at(std::uint64_t seed, std::uint32_t tag,
                                std::uint32_t i, std::uint32_t j, std::uint32_t lane) const {
    if (kind == Kind::degenerate)
        return 1.0;
    return std::exp(kLn10Over10 * sigma_db * normal_at(seed, tag, i, j, lane));
}

NetworkModel::NetworkModel(double alpha_, double lambda_, ShadowingSpec shadowing_)
    : alpha(alpha_), lambda(lambda_), shadowing(shadowing_) {
    if (!(alpha > 2.0))
        throw std::domain_error("NetworkModel: alpha must exceed 2");
    if (!(lambda > 0.0))
        throw std::domain_error("NetworkModel: lambda must be positive");
}

double NetworkModel::plps_intensity_coeff() const {
    return lambda * std::numbers::pi * s_delta_moment();
}

Scheme::Scheme(int K_, int M_, double kappa_) : K(K_), M(M_), kappa(kappa_) {
    if (K < 1)
        throw std::domain_error("Scheme: K must be a positive integer");
    if (M < 1)
        throw std::domain_error("Scheme: M must be a positive integer");
    if (!(kappa >= 1.0))
        throw std::domain_error("Scheme: kappa must be >= 1");
}

void sample_plps_into(PlpsSample& out, const NetworkModel& model, const Scheme& scheme,
                      int n_points, CounterRng& rng) {
    if (n_points < 0)
        throw std::domain_error("sample_plps: n_points must be nonnegative");
    const double coeff = model.plps_intensity_coeff();
    const double inv_delta = 1.0 / model.delta().value();
    const std::size_t n = static_cast<std::size_t>(n_points);

    out.rb_count = scheme.M;
    out.xi.resize(n);
    out.fading.resize(n * static_cast<std::size_t>(scheme.M));
    out.active.assign(n, false);

    double arrival = 0.0;
    if (inv_delta == 2.0) { // alpha = 4: square instead of pow
        for (std::size_t i = 0; i < n; ++i) {
            arrival += rng.exponential();
            const double t = arrival / coeff;
            out.xi[i] = t * t;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            arrival += rng.exponential();
            out.xi[i] = std::pow(arrival / coeff, inv_delta);
        }
    }
    const double p_tx = 1.0 / scheme.kappa;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0)
            out.active[i] = true;
        else if (i < static_cast<std::size_t>(scheme.K))
            out.active[i] = false;
        else
            out.active[i] = rng.bernoulli(p_tx);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (int m = 0; m < scheme.M; ++m)
            out.fading[i * static_cast<std::size_t>(scheme.M) + m] = rng.exponential();
}

PlpsSample sample_plps(const NetworkModel& model, const Scheme& scheme,
                       int n_points, std::uint64_t rng_seed, std::uint64_t realization) {
    PlpsSample out;
    CounterRng rng(rng_seed, realization);
    sample_plps_into(out, model, scheme, n_points, rng);
    return out;
}

double xi_ratio_ccdf(int k, double x, Delta delta) {
    if (k < 2)
        throw std::domain_error("xi_ratio_ccdf: k must be >= 2");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("xi_ratio_ccdf: x outside [0,1]");
    return std::pow(1.0 - std::pow(x, delta.value()), k - 1);
}

double plps_truncation_tail_fraction(const NetworkModel& model, double kappa, int n_points) {
    if (n_points < 2)
        throw std::domain_error("plps_truncation_tail_fraction: need n_points >= 2");
    const double d = model.delta().value();
    const double coeff = model.plps_intensity_coeff();
    auto radius = [&](int k) { return std::pow(k / coeff, 1.0 / d); };
    // E[tail beyond r] = (coeff/kappa) * delta/(1-delta) * r^(delta-1)
    const double tail = (coeff / kappa) * d / (1.0 - d) * std::pow(radius(n_points), d - 1.0);
    double kept = 0.0;
    for (int k = 2; k <= n_points; ++k)
        kept += 1.0 / (kappa * radius(k));
    return tail / (kept + tail);
}

std::string PlpsSample::to_json() const {
    nlohmann::json j;
    j["xi"] = xi;
    auto& rows = j["fading"] = nlohmann::json::array();
    for (std::size_t i = 0; i < xi.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int m = 0; m < rb_count; ++m)
            row.push_back(fade(i, m));
        rows.push_back(std::move(row));
    }
    j["active"] = std::vector<int>(active.begin(), active.end());
    return j.dump();
}

} // namespace cellcov
