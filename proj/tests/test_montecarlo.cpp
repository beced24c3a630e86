#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "json.hpp"

#include "cellcov/analytic.hpp"
#include "cellcov/montecarlo.hpp"

using namespace cellcov;

namespace {
const NetworkModel kModel(4.0, 1.0);
const Delta kHalf(0.5);

double combined_err(const SimEstimate& a, const SimEstimate& b) {
    return std::sqrt(a.stderr_value * a.stderr_value + b.stderr_value * b.stderr_value);
}
} // namespace

TEST_CASE("simulate_coverage matches the analytic formulas") {
    SimOptions opt;
    const long long runs = 30000;

    const auto base = simulate_coverage(kModel, Scheme(1, 1, 1.0), 1.0, runs, 101, opt);
    CHECK(base.runs == runs);
    CHECK(base.stderr_value ==
          doctest::Approx(std::sqrt(base.value * (1.0 - base.value) / runs)));
    CHECK(std::abs(base.value - coverage_baseline(1.0, kHalf)) < 3.5 * base.stderr_value);

    const auto icic = simulate_coverage(kModel, Scheme(3, 1, 1.0), 1.0, runs, 102, opt);
    CHECK(std::abs(icic.value - coverage_icic(1.0, 3, 1.0, kHalf)) < 3.5 * icic.stderr_value);

    const auto comb = simulate_coverage(kModel, Scheme(2, 2, 2.0), 1.0, runs, 103, opt);
    CHECK(std::abs(comb.value - coverage_combined(1.0, 2, 2, 2.0, kHalf)) <
          3.5 * comb.stderr_value);

    // near-certain coverage at a vanishing threshold
    const auto sure = simulate_coverage(kModel, Scheme(1, 1, 1.0), 1e-6, 5000, 104,
                                        SimOptions{500, 1});
    CHECK(sure.value > 0.999);
}

TEST_CASE("coverage curve shares realizations and stays consistent") {
    const std::vector<double> grid{0.1, 1.0, 10.0};
    SimOptions opt{1000, 1};
    const auto curve = simulate_coverage_curve(kModel, Scheme(2, 1, 1.0), grid, 20000, 7, opt);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].value > curve[1].value);
    CHECK(curve[1].value > curve[2].value);
    // scalar entry point is the one-point grid
    const auto single = simulate_coverage(kModel, Scheme(2, 1, 1.0), 1.0, 20000, 7, opt);
    CHECK(single.value == curve[1].value);
}

TEST_CASE("bit-identical estimates regardless of worker count") {
    const std::vector<double> grid{0.5, 2.0};
    SimOptions t1{800, 1}, t3{800, 3};
    const auto a = simulate_coverage_curve(kModel, Scheme(2, 2, 1.5), grid, 9001, 42, t1);
    const auto b = simulate_coverage_curve(kModel, Scheme(2, 2, 1.5), grid, 9001, 42, t3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(a[i].value == b[i].value);
        CHECK(a[i].stderr_value == b[i].stderr_value);
    }

    const auto l1 = estimate_effective_load(4.0, 1.0, 10.0, 0.0, 2, 6, 12.0, 99, 1);
    const auto l3 = estimate_effective_load(4.0, 1.0, 10.0, 0.0, 2, 6, 12.0, 99, 3);
    CHECK(l1.kappa_hat == l3.kappa_hat);
    CHECK(l1.mean_scheduled == l3.mean_scheduled);
}

TEST_CASE("shadowing and density invariance of PLPS coverage") {
    SimOptions opt{1000, 1};
    const long long runs = 30000;
    const NetworkModel shadowed(4.0, 1.0, ShadowingSpec::lognormal_db(10.0));
    const NetworkModel dense(4.0, 2.0);

    const auto a = simulate_coverage(kModel, Scheme(2, 1, 1.0), 1.0, runs, 201, opt);
    const auto b = simulate_coverage(shadowed, Scheme(2, 1, 1.0), 1.0, runs, 202, opt);
    const auto c = simulate_coverage(dense, Scheme(2, 1, 1.0), 1.0, runs, 203, opt);
    CHECK(std::abs(a.value - b.value) < 3.0 * combined_err(a, b));
    CHECK(std::abs(a.value - c.value) < 3.0 * combined_err(a, c));
}

TEST_CASE("effective load: sanity on a reduced window") {
    // K=1 load is the inverse fraction of non-empty cells; near 1.01 at
    // lambda_u = 10 lambda
    const auto e1 = estimate_effective_load(4.0, 1.0, 10.0, 0.0, 1, 100, 15.0, 11, 1);
    CHECK(e1.K == 1);
    CHECK(e1.realizations == 100);
    CHECK(e1.kappa_hat == doctest::Approx(1.0101).epsilon(0.05));
    CHECK(e1.kappa_hat >= 1.0);

    // monotone in K and decreasing in sigma at fixed K
    const int ks[3] = {1, 2, 3};
    const auto t0 = estimate_effective_load_table(4.0, 1.0, 10.0, 0.0, ks, 60, 15.0, 12, 1);
    CHECK(t0.per_k[0].kappa_hat < t0.per_k[1].kappa_hat);
    CHECK(t0.per_k[1].kappa_hat < t0.per_k[2].kappa_hat);
    const auto t10 = estimate_effective_load_table(4.0, 1.0, 10.0, 10.0, ks, 60, 15.0, 12, 1);
    CHECK(t10.per_k[2].kappa_hat < t0.per_k[2].kappa_hat);
    CHECK(t10.per_k[1].kappa_hat < t0.per_k[1].kappa_hat);

    // CSV/JSON emission
    LoadEstimate le = t0;
    le.fit = AffineFit{0.4, 0.6};
    le.has_fit = true;
    CHECK(le.to_csv().find("K,kappa_hat,stderr,mean_bs,mean_scheduled,realizations,discards\n") !=
          std::string::npos);
    const auto j = nlohmann::json::parse(le.to_json());
    CHECK(j["per_k"].size() == 3);
    CHECK(j["affine_fit"]["eta1"].get<double>() == 0.6);
}

TEST_CASE("empty schedules are discarded and counted") {
    // lambda_u so small that many windows hold no user at all
    const auto e = estimate_effective_load(4.0, 1.0, 0.05, 0.0, 1, 80, 6.0, 13, 1);
    CHECK(e.discards > 0);
    CHECK(e.kappa_hat >= 1.0);
    CHECK(e.realizations == 80);
}

TEST_CASE("deployment coverage approaches the analytic prediction (K=1)") {
    const std::vector<double> grid{1.0};
    const auto est = simulate_deployment_coverage(kModel, 10.0, 1, 1, grid, 40, 15.0, 21, 1);
    REQUIRE(est.size() == 1);
    const double want = coverage_baseline(1.0, kHalf);
    CHECK(std::abs(est[0].value - want) < 0.04);
    CHECK(est[0].stderr_value < 0.02);
}

TEST_CASE("deployment sample dump: scheduling invariants and JSON shape") {
    const auto s = sample_deployment(4.0, 1.0, 10.0, 6.0, 3, 12.0, 31, 2);
    REQUIRE(!s.bs_points.empty());
    REQUIRE(s.serving_map.size() == s.user_points.size());
    REQUIRE(s.status.size() == s.bs_points.size());

    // a serving BS serves exactly one scheduled user
    std::set<int> serving_set;
    int scheduled = 0;
    for (int b : s.serving_map) {
        if (b < 0)
            continue;
        ++scheduled;
        CHECK(s.status[static_cast<std::size_t>(b)] == 1);
        CHECK(serving_set.insert(b).second);
    }
    int serving_count = 0;
    for (int st : s.status) {
        CHECK(st >= 0);
        CHECK(st <= 2);
        serving_count += (st == 1) ? 1 : 0;
    }
    CHECK(serving_count == scheduled);
    CHECK(scheduled > 0);

    const auto j = nlohmann::json::parse(s.to_json());
    CHECK(j["bs_points"].size() == s.bs_points.size());
    CHECK(j["user_points"].size() == s.user_points.size());
    CHECK(j["status"].size() == s.status.size());
    if (s.reference_user >= 0)
        CHECK(j["bs_shadowing"].size() == s.bs_points.size());
}

TEST_CASE("xi statistics reject out-of-range k") {
    const int ks[1] = {1};
    CHECK_THROWS_AS(empirical_xi_statistics(kModel, Scheme(1, 1, 1.0), ks, 10, 1, 100),
                    std::domain_error);
}
