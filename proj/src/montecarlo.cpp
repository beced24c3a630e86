#include "cellcov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "json.hpp"

namespace cellcov {

namespace {

// Stream/tag layout within one seed. Sequential streams use the realization
// index shifted left; keyed access (shadowing, deployment fading) uses tags
// with the realization in the lane word.
constexpr std::uint64_t kStreamPlps = 0;
constexpr std::uint64_t kStreamGeometry = 1;
constexpr std::uint64_t kStreamVisitOrder = 2;
constexpr std::uint32_t kTagPairShadow = 1;
constexpr std::uint32_t kTagFadeBase = 16; // +m, m < 16

std::uint64_t stream_id(std::uint64_t realization, std::uint64_t purpose) {
    return (realization << 2) | purpose;
}

// Runs fn(i, worker) for i in [0,n); worker indices partition the range so
// per-worker accumulators never race.
template <class Fn>
void parallel_for(long long n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (long long i = 0; i < n; ++i)
            fn(i, 0);
        return;
    }
    const int t = static_cast<int>(std::min<long long>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        const long long lo = n * w / t;
        const long long hi = n * (w + 1) / t;
        pool.emplace_back([&fn, lo, hi, w] {
            for (long long i = lo; i < hi; ++i)
                fn(i, w);
        });
    }
    for (auto& th : pool)
        th.join();
}

int poisson_count(CounterRng& rng, double mean) {
    int n = 0;
    double acc = rng.exponential();
    while (acc <= mean) {
        ++n;
        acc += rng.exponential();
    }
    return n;
}

} // namespace

double default_window_side(double lambda_bs) { return 30.0 / std::sqrt(lambda_bs); }

// ---- PLPS-side coverage -----------------------------------------------------

std::vector<SimEstimate> simulate_coverage_curve(const NetworkModel& model, const Scheme& scheme,
                                                 std::span<const double> theta_grid,
                                                 long long runs, std::uint64_t seed,
                                                 const SimOptions& opt) {
    if (runs < 1)
        throw std::domain_error("simulate_coverage: runs must be positive");
    for (double t : theta_grid)
        if (!(t > 0.0))
            throw std::domain_error("simulate_coverage: theta must be positive");
    if (opt.n_points < 2)
        throw std::domain_error("simulate_coverage: n_points too small");

    const std::size_t nt = theta_grid.size();
    const int workers = std::max(1, opt.threads);
    std::vector<std::vector<long long>> tallies(static_cast<std::size_t>(workers),
                                                std::vector<long long>(nt, 0));

    const int n = opt.n_points;
    const int M = scheme.M;
    parallel_for(runs, workers, [&](long long r, int worker) {
        thread_local PlpsSample ws;
        thread_local std::vector<double> interf;
        CounterRng rng(seed, stream_id(static_cast<std::uint64_t>(r), kStreamPlps));
        sample_plps_into(ws, model, scheme, n, rng);

        interf.assign(static_cast<std::size_t>(M), 0.0);
        for (int i = 1; i < n; ++i) {
            if (!ws.active[static_cast<std::size_t>(i)])
                continue;
            const double inv_xi = 1.0 / ws.xi[static_cast<std::size_t>(i)];
            for (int m = 0; m < M; ++m)
                interf[static_cast<std::size_t>(m)] += ws.fade(static_cast<std::size_t>(i), m) * inv_xi;
        }
        const double inv_xi1 = 1.0 / ws.xi[0];
        double best = 0.0;
        for (int m = 0; m < M; ++m) {
            const double im = interf[static_cast<std::size_t>(m)];
            const double sir = (im > 0.0) ? ws.fade(0, m) * inv_xi1 / im
                                          : std::numeric_limits<double>::infinity();
            best = std::max(best, sir);
        }
        auto& slot = tallies[static_cast<std::size_t>(worker)];
        for (std::size_t t = 0; t < nt; ++t)
            if (best > theta_grid[t])
                ++slot[t];
    });

    std::vector<SimEstimate> out(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        long long succ = 0;
        for (const auto& slot : tallies)
            succ += slot[t];
        const double p = static_cast<double>(succ) / static_cast<double>(runs);
        out[t] = SimEstimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(runs)), runs, seed, 0};
    }
    return out;
}

SimEstimate simulate_coverage(const NetworkModel& model, const Scheme& scheme, double theta,
                              long long runs, std::uint64_t seed, const SimOptions& opt) {
    const double grid[1] = {theta};
    return simulate_coverage_curve(model, scheme, grid, runs, seed, opt)[0];
}

// ---- deployment machinery ---------------------------------------------------

namespace {

struct Deployment {
    double L = 0.0;
    double alpha = 0.0;
    ShadowingSpec shadowing;
    std::uint64_t seed = 0;
    std::uint32_t realization = 0;
    int n_bs = 0;
    int n_users = 0;
    std::vector<double> bs_x, bs_y, user_x, user_y;
    std::vector<int> order; // visit order over users
    int kmax = 0;
    std::vector<int> top;   // n_users x kmax, strongest first

    double pair_power(int u, int b) const {
        const double dx = user_x[static_cast<std::size_t>(u)] - bs_x[static_cast<std::size_t>(b)];
        const double dy = user_y[static_cast<std::size_t>(u)] - bs_y[static_cast<std::size_t>(b)];
        const double r2 = dx * dx + dy * dy;
        const double s = shadowing.sample_at(seed, kTagPairShadow,
                                             static_cast<std::uint32_t>(u),
                                             static_cast<std::uint32_t>(b), realization);
        if (alpha == 4.0)
            return s / (r2 * r2);
        return s * std::pow(r2, -0.5 * alpha);
    }
};

void build_deployment(Deployment& dep, double alpha, double lambda_bs, double lambda_u,
                      const ShadowingSpec& shadow, int kmax, double L,
                      std::uint64_t seed, std::uint64_t realization) {
    dep.L = L;
    dep.alpha = alpha;
    dep.shadowing = shadow;
    dep.seed = seed;
    dep.realization = static_cast<std::uint32_t>(realization);

    CounterRng geom(seed, stream_id(realization, kStreamGeometry));
    dep.n_bs = poisson_count(geom, lambda_bs * L * L);
    dep.bs_x.resize(static_cast<std::size_t>(dep.n_bs));
    dep.bs_y.resize(static_cast<std::size_t>(dep.n_bs));
    for (int b = 0; b < dep.n_bs; ++b) {
        dep.bs_x[static_cast<std::size_t>(b)] = L * geom.uniform();
        dep.bs_y[static_cast<std::size_t>(b)] = L * geom.uniform();
    }
    dep.n_users = poisson_count(geom, lambda_u * L * L);
    dep.user_x.resize(static_cast<std::size_t>(dep.n_users));
    dep.user_y.resize(static_cast<std::size_t>(dep.n_users));
    for (int u = 0; u < dep.n_users; ++u) {
        dep.user_x[static_cast<std::size_t>(u)] = L * geom.uniform();
        dep.user_y[static_cast<std::size_t>(u)] = L * geom.uniform();
    }

    CounterRng vis(seed, stream_id(realization, kStreamVisitOrder));
    dep.order.resize(static_cast<std::size_t>(dep.n_users));
    for (int u = 0; u < dep.n_users; ++u)
        dep.order[static_cast<std::size_t>(u)] = u;
    for (int i = dep.n_users - 1; i > 0; --i) {
        const auto j = static_cast<int>(vis.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(dep.order[static_cast<std::size_t>(i)], dep.order[static_cast<std::size_t>(j)]);
    }

    dep.kmax = std::min(kmax, dep.n_bs);
    dep.top.assign(static_cast<std::size_t>(dep.n_users) * static_cast<std::size_t>(dep.kmax), -1);
    std::vector<double> pw(static_cast<std::size_t>(dep.kmax));
    for (int u = 0; u < dep.n_users; ++u) {
        int filled = 0;
        int* t = &dep.top[static_cast<std::size_t>(u) * static_cast<std::size_t>(dep.kmax)];
        for (int b = 0; b < dep.n_bs; ++b) {
            const double p = dep.pair_power(u, b);
            if (filled == dep.kmax && p <= pw[static_cast<std::size_t>(filled - 1)])
                continue;
            int pos = std::min(filled, dep.kmax - 1);
            while (pos > 0 && pw[static_cast<std::size_t>(pos - 1)] < p) {
                pw[static_cast<std::size_t>(pos)] = pw[static_cast<std::size_t>(pos - 1)];
                t[pos] = t[pos - 1];
                --pos;
            }
            pw[static_cast<std::size_t>(pos)] = p;
            t[pos] = b;
            if (filled < dep.kmax)
                ++filled;
        }
    }
}

enum : std::uint8_t { kIdle = 0, kServing = 1, kMuted = 2 };

// Returns the number of scheduled users; fills status (per BS) and, when
// requested, the user -> serving BS map.
int run_schedule(const Deployment& dep, int K, std::vector<std::uint8_t>& status,
                 std::vector<int>* serving_map) {
    status.assign(static_cast<std::size_t>(dep.n_bs), kIdle);
    if (serving_map)
        serving_map->assign(static_cast<std::size_t>(dep.n_users), -1);
    const int k_eff = std::min(K, dep.kmax);
    int scheduled = 0;
    for (int u : dep.order) {
        const int* t = &dep.top[static_cast<std::size_t>(u) * static_cast<std::size_t>(dep.kmax)];
        if (dep.kmax == 0 || status[static_cast<std::size_t>(t[0])] != kIdle)
            continue;
        bool blocked = false;
        for (int i = 1; i < k_eff; ++i) {
            if (status[static_cast<std::size_t>(t[i])] == kServing) {
                blocked = true;
                break;
            }
        }
        if (blocked)
            continue;
        status[static_cast<std::size_t>(t[0])] = kServing;
        for (int i = 1; i < k_eff; ++i)
            status[static_cast<std::size_t>(t[i])] = kMuted;
        if (serving_map)
            (*serving_map)[static_cast<std::size_t>(u)] = t[0];
        ++scheduled;
    }
    return scheduled;
}

double resolve_window(double window_side, double lambda_bs) {
    if (window_side == 0.0)
        return default_window_side(lambda_bs);
    if (!(window_side > 0.0))
        throw std::domain_error("deployment: window side must be positive");
    return window_side;
}

} // namespace

LoadEstimate estimate_effective_load_table(double alpha, double lambda_bs, double lambda_u,
                                           double sigma_db, std::span<const int> Ks,
                                           long long realizations, double window_side,
                                           std::uint64_t seed, int threads) {
    if (realizations < 1)
        throw std::domain_error("estimate_effective_load: realizations must be positive");
    if (!(lambda_u > 0.0))
        throw std::domain_error("estimate_effective_load: lambda_u must be positive");
    if (Ks.empty())
        throw std::domain_error("estimate_effective_load: need at least one K");
    int kmax = 0;
    for (int k : Ks) {
        if (k < 1)
            throw std::domain_error("estimate_effective_load: K must be positive");
        kmax = std::max(kmax, k);
    }
    const double L = resolve_window(window_side, lambda_bs);
    const ShadowingSpec shadow = (sigma_db > 0.0) ? ShadowingSpec::lognormal_db(sigma_db)
                                                  : ShadowingSpec::none();
    static_cast<void>(NetworkModel(alpha, lambda_bs, shadow)); // validates alpha/lambda

    const std::size_t nk = Ks.size();
    // ratio < 0 marks a discarded realization
    std::vector<double> ratio(static_cast<std::size_t>(realizations) * nk, -1.0);
    std::vector<int> bs_count(static_cast<std::size_t>(realizations), 0);
    std::vector<int> sched_count(static_cast<std::size_t>(realizations) * nk, 0);

    parallel_for(realizations, threads, [&](long long r, int) {
        thread_local Deployment dep;
        thread_local std::vector<std::uint8_t> status;
        build_deployment(dep, alpha, lambda_bs, lambda_u, shadow, kmax, L, seed,
                         static_cast<std::uint64_t>(r));
        bs_count[static_cast<std::size_t>(r)] = dep.n_bs;
        for (std::size_t ki = 0; ki < nk; ++ki) {
            const int sched = run_schedule(dep, Ks[ki], status, nullptr);
            sched_count[static_cast<std::size_t>(r) * nk + ki] = sched;
            if (dep.n_bs > 0 && sched > 0)
                ratio[static_cast<std::size_t>(r) * nk + ki] =
                    static_cast<double>(dep.n_bs) / static_cast<double>(sched);
        }
    });

    LoadEstimate out;
    for (std::size_t ki = 0; ki < nk; ++ki) {
        LoadTableEntry e;
        e.K = Ks[ki];
        e.realizations = realizations;
        double sum = 0.0, sum2 = 0.0, bs_sum = 0.0, sched_sum = 0.0;
        long long kept = 0;
        for (long long r = 0; r < realizations; ++r) {
            const double v = ratio[static_cast<std::size_t>(r) * nk + ki];
            if (v < 0.0) {
                ++e.discards;
                continue;
            }
            ++kept;
            sum += v;
            sum2 += v * v;
            bs_sum += bs_count[static_cast<std::size_t>(r)];
            sched_sum += sched_count[static_cast<std::size_t>(r) * nk + ki];
        }
        if (kept == 0)
            throw std::runtime_error("estimate_effective_load: all realizations discarded");
        e.kappa_hat = sum / static_cast<double>(kept);
        if (kept > 1) {
            const double var = (sum2 - sum * sum / static_cast<double>(kept)) /
                               static_cast<double>(kept - 1);
            e.stderr_value = std::sqrt(std::max(0.0, var) / static_cast<double>(kept));
        }
        e.mean_bs = bs_sum / static_cast<double>(kept);
        e.mean_scheduled = sched_sum / static_cast<double>(kept);
        if (e.discards > 0)
            std::fprintf(stderr,
                         "warning: estimate_effective_load K=%d discarded %lld empty realizations\n",
                         e.K, static_cast<long long>(e.discards));
        out.per_k.push_back(e);
    }
    return out;
}

LoadTableEntry estimate_effective_load(double alpha, double lambda_bs, double lambda_u,
                                       double sigma_db, int K, long long realizations,
                                       double window_side, std::uint64_t seed, int threads) {
    const int ks[1] = {K};
    return estimate_effective_load_table(alpha, lambda_bs, lambda_u, sigma_db, ks, realizations,
                                         window_side, seed, threads)
        .per_k[0];
}

std::vector<SimEstimate> simulate_deployment_coverage(const NetworkModel& model, double lambda_u,
                                                      int K, int M,
                                                      std::span<const double> theta_grid,
                                                      long long realizations, double window_side,
                                                      std::uint64_t seed, int threads) {
    if (realizations < 1)
        throw std::domain_error("simulate_deployment_coverage: realizations must be positive");
    if (K < 1 || M < 1 || M > 15)
        throw std::domain_error("simulate_deployment_coverage: bad K or M");
    for (double t : theta_grid)
        if (!(t > 0.0))
            throw std::domain_error("simulate_deployment_coverage: theta must be positive");
    const double L = resolve_window(window_side, model.lambda);
    const std::size_t nt = theta_grid.size();

    // per-realization coverage fractions; NaN marks a discarded realization
    std::vector<double> frac(static_cast<std::size_t>(realizations) * nt,
                             std::numeric_limits<double>::quiet_NaN());

    parallel_for(realizations, threads, [&](long long r, int) {
        thread_local Deployment dep;
        thread_local std::vector<std::uint8_t> status;
        thread_local std::vector<int> serving_map;
        thread_local std::vector<int> serving_bs;
        thread_local std::vector<double> interf;
        thread_local std::vector<long long> hits;

        build_deployment(dep, model.alpha, model.lambda, lambda_u, model.shadowing, K, L, seed,
                         static_cast<std::uint64_t>(r));
        run_schedule(dep, K, status, &serving_map);

        serving_bs.clear();
        for (int b = 0; b < dep.n_bs; ++b)
            if (status[static_cast<std::size_t>(b)] == kServing)
                serving_bs.push_back(b);

        hits.assign(nt, 0);
        long long observed = 0;
        const double lo = 0.25 * L, hi = 0.75 * L;
        for (int u = 0; u < dep.n_users; ++u) {
            const int bstar = serving_map[static_cast<std::size_t>(u)];
            if (bstar < 0)
                continue;
            const double ux = dep.user_x[static_cast<std::size_t>(u)];
            const double uy = dep.user_y[static_cast<std::size_t>(u)];
            if (ux < lo || ux > hi || uy < lo || uy > hi)
                continue;
            ++observed;

            interf.assign(static_cast<std::size_t>(M), 0.0);
            for (int b : serving_bs) {
                if (b == bstar)
                    continue;
                const double p = dep.pair_power(u, b);
                for (int m = 0; m < M; ++m)
                    interf[static_cast<std::size_t>(m)] +=
                        p * exponential_at(seed, kTagFadeBase + static_cast<std::uint32_t>(m),
                                           static_cast<std::uint32_t>(u),
                                           static_cast<std::uint32_t>(b), dep.realization);
            }
            const double ps = dep.pair_power(u, bstar);
            double best = 0.0;
            for (int m = 0; m < M; ++m) {
                const double sig =
                    ps * exponential_at(seed, kTagFadeBase + static_cast<std::uint32_t>(m),
                                        static_cast<std::uint32_t>(u),
                                        static_cast<std::uint32_t>(bstar), dep.realization);
                const double im = interf[static_cast<std::size_t>(m)];
                const double sir = (im > 0.0) ? sig / im : std::numeric_limits<double>::infinity();
                best = std::max(best, sir);
            }
            for (std::size_t t = 0; t < nt; ++t)
                if (best > theta_grid[t])
                    ++hits[t];
        }
        if (observed > 0)
            for (std::size_t t = 0; t < nt; ++t)
                frac[static_cast<std::size_t>(r) * nt + t] =
                    static_cast<double>(hits[t]) / static_cast<double>(observed);
    });

    std::vector<SimEstimate> out(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        double sum = 0.0, sum2 = 0.0;
        long long kept = 0, discards = 0;
        for (long long r = 0; r < realizations; ++r) {
            const double v = frac[static_cast<std::size_t>(r) * nt + t];
            if (std::isnan(v)) {
                ++discards;
                continue;
            }
            ++kept;
            sum += v;
            sum2 += v * v;
        }
        if (kept == 0)
            throw std::runtime_error("simulate_deployment_coverage: all realizations discarded");
        SimEstimate e;
        e.value = sum / static_cast<double>(kept);
        if (kept > 1) {
            const double var = (sum2 - sum * sum / static_cast<double>(kept)) /
                               static_cast<double>(kept - 1);
            e.stderr_value = std::sqrt(std::max(0.0, var) / static_cast<double>(kept));
        }
        e.runs = kept;
        e.seed = seed;
        e.discards = discards;
        out[t] = e;
        if (discards > 0 && t == 0)
            std::fprintf(stderr,
                         "warning: simulate_deployment_coverage discarded %lld realizations\n",
                         static_cast<long long>(discards));
    }
    return out;
}

// ---- PLPS statistics --------------------------------------------------------

std::vector<XiStatistics> empirical_xi_statistics(const NetworkModel& model, const Scheme& scheme,
                                                  std::span<const int> ks, long long realizations,
                                                  std::uint64_t seed, int n_points) {
    for (int k : ks)
        if (k < 2 || k >= n_points)
            throw std::domain_error("empirical_xi_statistics: need 2 <= k < n_points");
    std::vector<XiStatistics> out;
    for (int k : ks) {
        XiStatistics s;
        s.k = k;
        s.x_ratio.reserve(static_cast<std::size_t>(realizations));
        s.y.reserve(static_cast<std::size_t>(realizations));
        out.push_back(std::move(s));
    }
    PlpsSample ws;
    for (long long r = 0; r < realizations; ++r) {
        CounterRng rng(seed, stream_id(static_cast<std::uint64_t>(r), kStreamPlps));
        sample_plps_into(ws, model, scheme, n_points, rng);
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            const int k = ks[ki];
            double ik = 0.0;
            for (int i = k; i < n_points; ++i)
                if (ws.active[static_cast<std::size_t>(i)])
                    ik += ws.fade(static_cast<std::size_t>(i), 0) / ws.xi[static_cast<std::size_t>(i)];
            out[ki].x_ratio.push_back(ws.xi[0] / ws.xi[static_cast<std::size_t>(k - 1)]);
            out[ki].y.push_back(1.0 / (ws.xi[static_cast<std::size_t>(k - 1)] * ik));
        }
    }
    return out;
}

// ---- dumps and serialization ------------------------------------------------

DeploymentSample sample_deployment(double alpha, double lambda_bs, double lambda_u,
                                   double sigma_db, int K, double window_side,
                                   std::uint64_t seed, std::uint64_t realization) {
    const double L = resolve_window(window_side, lambda_bs);
    const ShadowingSpec shadow = (sigma_db > 0.0) ? ShadowingSpec::lognormal_db(sigma_db)
                                                  : ShadowingSpec::none();
    Deployment dep;
    std::vector<std::uint8_t> status;
    std::vector<int> serving_map;
    build_deployment(dep, alpha, lambda_bs, lambda_u, shadow, K, L, seed, realization);
    run_schedule(dep, K, status, &serving_map);

    DeploymentSample s;
    s.window_side = L;
    for (int b = 0; b < dep.n_bs; ++b)
        s.bs_points.push_back({dep.bs_x[static_cast<std::size_t>(b)],
                               dep.bs_y[static_cast<std::size_t>(b)]});
    for (int u = 0; u < dep.n_users; ++u)
        s.user_points.push_back({dep.user_x[static_cast<std::size_t>(u)],
                                 dep.user_y[static_cast<std::size_t>(u)]});
    s.serving_map = serving_map;
    s.status.assign(status.begin(), status.end());

    const double lo = 0.25 * L, hi = 0.75 * L;
    for (int u = 0; u < dep.n_users; ++u) {
        if (serving_map[static_cast<std::size_t>(u)] < 0)
            continue;
        const double ux = dep.user_x[static_cast<std::size_t>(u)];
        const double uy = dep.user_y[static_cast<std::size_t>(u)];
        if (ux < lo || ux > hi || uy < lo || uy > hi)
            continue;
        s.reference_user = u;
        break;
    }
    if (s.reference_user >= 0) {
        s.bs_shadowing.resize(static_cast<std::size_t>(dep.n_bs));
        for (int b = 0; b < dep.n_bs; ++b)
            s.bs_shadowing[static_cast<std::size_t>(b)] =
                shadow.sample_at(seed, kTagPairShadow,
                                 static_cast<std::uint32_t>(s.reference_user),
                                 static_cast<std::uint32_t>(b),
                                 static_cast<std::uint32_t>(realization));
    }
    return s;
}

std::string DeploymentSample::to_json() const {
    nlohmann::json j;
    j["schema"] = "cellcov.deployment_sample.v1";
    j["window_side"] = window_side;
    auto points = [](const std::vector<std::array<double, 2>>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& p : v)
            a.push_back({p[0], p[1]});
        return a;
    };
    j["bs_points"] = points(bs_points);
    j["user_points"] = points(user_points);
    j["serving_map"] = serving_map;
    j["status"] = status;
    j["bs_shadowing"] = bs_shadowing;
    j["reference_user"] = reference_user;
    return j.dump();
}

std::string LoadEstimate::to_csv() const {
    std::string out = "# cellcov.load_estimate.v1\n";
    out += "K,kappa_hat,stderr,mean_bs,mean_scheduled,realizations,discards\n";
    char buf[200];
    for (const auto& e : per_k) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%lld,%lld\n", e.K, e.kappa_hat,
                      e.stderr_value, e.mean_bs, e.mean_scheduled,
                      static_cast<long long>(e.realizations), static_cast<long long>(e.discards));
        out += buf;
    }
    if (has_fit) {
        std::snprintf(buf, sizeof buf, "# affine_fit eta0=%.17g eta1=%.17g\n", fit.eta0, fit.eta1);
        out += buf;
    }
    return out;
}

std::string LoadEstimate::to_json() const {
    nlohmann::json j;
    j["schema"] = "cellcov.load_estimate.v1";
    auto& rows = j["per_k"] = nlohmann::json::array();
    for (const auto& e : per_k) {
        rows.push_back({{"K", e.K},
                        {"kappa_hat", e.kappa_hat},
                        {"stderr", e.stderr_value},
                        {"mean_bs", e.mean_bs},
                        {"mean_scheduled", e.mean_scheduled},
                        {"realizations", e.realizations},
                        {"discards", e.discards}});
    }
    if (has_fit)
        j["affine_fit"] = {{"eta0", fit.eta0}, {"eta1", fit.eta1}};
    else
        j["affine_fit"] = nullptr;
    return j.dump();
}

} // namespace cellcov
