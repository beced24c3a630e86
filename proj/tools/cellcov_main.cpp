// cellcov: coverage analysis for Poisson cellular downlink under BS
// coordination and selection-combining diversity. Subcommands emit CSV/JSON
// data files; thetas are taken in dB on the command line and converted to
// linear scale exactly once.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "cellcov/analytic.hpp"
#include "cellcov/asymptotics.hpp"
#include "cellcov/montecarlo.hpp"
#include "cellcov/optimize.hpp"
#include "cellcov/runconfig.hpp"

using namespace cellcov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file " + cfg.output);
    out << text;
}

char fmt_buf[256];

std::string fmt(const char* pattern, auto... args) {
    std::snprintf(fmt_buf, sizeof fmt_buf, pattern, args...);
    return fmt_buf;
}

NetworkModel model_from(const RunConfig& cfg) {
    const ShadowingSpec shadow = cfg.sigma_db > 0.0 ? ShadowingSpec::lognormal_db(cfg.sigma_db)
                                                    : ShadowingSpec::none();
    return NetworkModel(cfg.alpha, cfg.lambda, shadow);
}

// ---- effective-load cache ---------------------------------------------------

std::filesystem::path cache_dir() {
    if (const char* env = std::getenv("CELLCOV_CACHE_DIR"))
        return env;
    return ".cellcov_cache";
}

LoadEstimate load_table_cached(const RunConfig& cfg, int k_max) {
    std::vector<int> ks;
    for (int k = 1; k <= std::max(2, k_max); ++k)
        ks.push_back(k);
    const double window = cfg.window > 0.0 ? cfg.window : default_window_side(cfg.lambda);
    const std::string key = fmt("load_a%g_s%g_l%g_lu%g_kmax%d_r%lld_w%g_seed%llu.json",
                                cfg.alpha, cfg.sigma_db, cfg.lambda, cfg.lambda_u,
                                static_cast<int>(ks.size()), cfg.load_realizations, window,
                                static_cast<unsigned long long>(cfg.seed));
    const auto path = cache_dir() / key;
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        const auto j = nlohmann::json::parse(ss.str());
        LoadEstimate est;
        for (const auto& row : j.at("per_k")) {
            LoadTableEntry e;
            e.K = row.at("K").get<int>();
            e.kappa_hat = row.at("kappa_hat").get<double>();
            e.stderr_value = row.at("stderr").get<double>();
            e.mean_bs = row.at("mean_bs").get<double>();
            e.mean_scheduled = row.at("mean_scheduled").get<double>();
            e.realizations = row.at("realizations").get<long long>();
            e.discards = row.at("discards").get<long long>();
            est.per_k.push_back(e);
        }
        est.fit = fit_affine_load(est);
        est.has_fit = true;
        return est;
    }
    LoadEstimate est = estimate_effective_load_table(cfg.alpha, cfg.lambda, cfg.lambda_u,
                                                     cfg.sigma_db, ks, cfg.load_realizations,
                                                     cfg.window, cfg.seed, cfg.threads);
    est.fit = fit_affine_load(est);
    est.has_fit = true;
    std::error_code ec;
    std::filesystem::create_directories(cache_dir(), ec);
    if (!ec) {
        std::ofstream out(path, std::ios::binary);
        out << est.to_json();
    }
    return est;
}

// kappa for one K: numeric literal, or the affine fit under --kappa auto.
struct KappaSource {
    bool is_auto = false;
    double fixed = 1.0;
    AffineFit fit;

    double for_k(int k) const { return is_auto ? fit.predict(k) : fixed; }
};

KappaSource kappa_source(const RunConfig& cfg, int k_max) {
    KappaSource src;
    if (cfg.kappa == "auto") {
        src.is_auto = true;
        src.fit = load_table_cached(cfg, k_max).fit;
        return src;
    }
    try {
        src.fixed = std::stod(cfg.kappa);
    } catch (const std::invalid_argument&) {
        throw std::domain_error("kappa must be a number or 'auto'");
    }
    if (!(src.fixed >= 1.0))
        throw std::domain_error("kappa must be >= 1");
    return src;
}

// ---- subcommands --------------------------------------------------------------

int run_coverage(const RunConfig& cfg) {
    const Delta delta = Delta::from_alpha(cfg.alpha);
    const auto thetas_db = cfg.theta_grid_db();
    int k_max = 1;
    for (int k : cfg.K)
        k_max = std::max(k_max, k);
    const KappaSource kappa = kappa_source(cfg, k_max);

    if (cfg.format == "json") {
        nlohmann::json j;
        j["schema"] = "cellcov.coverage_grid.v1";
        auto& rows = j["curves"] = nlohmann::json::array();
        for (int K : cfg.K) {
            for (int M : cfg.M) {
                const double kap = kappa.for_k(K);
                nlohmann::json entry;
                entry["K"] = K;
                entry["M"] = M;
                entry["kappa"] = kap;
                entry["curve"] = nlohmann::json::parse(
                    coverage_curve(cfg.theta_grid_linear(), K, M, kap, delta).to_json());
                rows.push_back(std::move(entry));
            }
        }
        write_output(cfg, j.dump() + "\n");
        return kExitOk;
    }

    std::string out = "# cellcov.coverage_grid.v1\n";
    out += "K,M,kappa,theta_db,theta_linear,value\n";
    for (int K : cfg.K) {
        for (int M : cfg.M) {
            const double kap = kappa.for_k(K);
            for (double db : thetas_db) {
                const double t = db_to_linear(db);
                out += fmt("%d,%d,%.17g,%.17g,%.17g,%.17g\n", K, M, kap, db, t,
                           coverage_combined(t, K, M, kap, delta));
            }
        }
    }
    write_output(cfg, out);
    return kExitOk;
}

int run_asymptote(const RunConfig& cfg) {
    const Delta delta = Delta::from_alpha(cfg.alpha);
    const KappaSource kappa = kappa_source(cfg, *std::max_element(cfg.K.begin(), cfg.K.end()));
    std::vector<AsymptoticCoefficient> rows;
    const bool hr = cfg.regime == "hr" || cfg.regime == "both";
    const bool hse = cfg.regime == "hse" || cfg.regime == "both";
    if (!hr && !hse)
        throw std::domain_error("regime must be hr, hse or both");
    for (int K : cfg.K) {
        const double kap = kappa.for_k(K);
        if (hr)
            rows.push_back({AsymptoticCoefficient::Regime::high_reliability,
                            AsymptoticCoefficient::Axis::K, K, kap, delta.value(),
                            coeff_a_K(K, kap, delta), 1.0});
        if (hse) {
            const double value = (K == 1) ? coeff_b_M(1, delta) : coeff_b_K(K, kap, delta);
            rows.push_back({AsymptoticCoefficient::Regime::high_spectral_efficiency,
                            AsymptoticCoefficient::Axis::K, K, kap, delta.value(), value, -delta.value()});
        }
    }
    for (int M : cfg.M) {
        if (hr)
            rows.push_back({AsymptoticCoefficient::Regime::high_reliability,
                            AsymptoticCoefficient::Axis::M, M, 1.0, delta.value(),
                            coeff_a_M(M, delta), static_cast<double>(M)});
        if (hse)
            rows.push_back({AsymptoticCoefficient::Regime::high_spectral_efficiency,
                            AsymptoticCoefficient::Axis::M, M, 1.0, delta.value(),
                            coeff_b_M(M, delta), -delta.value()});
    }
    if (cfg.format == "json") {
        nlohmann::json j;
        j["schema"] = "cellcov.asymptotic_coefficients.v1";
        auto& arr = j["rows"] = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back(
                {{"axis", r.axis == AsymptoticCoefficient::Axis::K ? "K" : "M"},
                 {"index", r.index},
                 {"kappa", r.kappa},
                 {"delta", r.delta},
                 {"regime", r.regime == AsymptoticCoefficient::Regime::high_reliability
                                ? "high_reliability"
                                : "high_spectral_efficiency"},
                 {"value", r.value},
                 {"order", r.order}});
        }
        write_output(cfg, j.dump() + "\n");
        return kExitOk;
    }
    write_output(cfg, coefficients_to_csv(rows));
    return kExitOk;
}

void dump_plps_realizations(const RunConfig& cfg, const NetworkModel& model, const Scheme& scheme) {
    std::filesystem::create_directories(cfg.dump_dir);
    for (int r = 0; r < cfg.dump_realizations; ++r) {
        const auto sample = sample_plps(model, scheme, cfg.n_points, cfg.seed,
                                        static_cast<std::uint64_t>(r) << 2);
        std::ofstream out(std::filesystem::path(cfg.dump_dir) /
                          fmt("plps_%llu_K%d_M%d_%d.json",
                              static_cast<unsigned long long>(cfg.seed), scheme.K, scheme.M, r));
        out << sample.to_json() << "\n";
    }
}

void dump_deployment_realizations(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.dump_dir);
    const int kmax = *std::max_element(cfg.K.begin(), cfg.K.end());
    for (int r = 0; r < cfg.dump_realizations; ++r) {
        const auto sample = sample_deployment(cfg.alpha, cfg.lambda, cfg.lambda_u, cfg.sigma_db,
                                              kmax, cfg.window, cfg.seed,
                                              static_cast<std::uint64_t>(r));
        std::ofstream out(std::filesystem::path(cfg.dump_dir) /
                          fmt("deployment_%llu_%d.json",
                              static_cast<unsigned long long>(cfg.seed), r));
        out << sample.to_json() << "\n";
    }
}

int run_simulate(const RunConfig& cfg) {
    const NetworkModel model = model_from(cfg);
    const auto thetas_db = cfg.theta_grid_db();
    const auto thetas = cfg.theta_grid_linear();
    int k_max = 1;
    for (int k : cfg.K)
        k_max = std::max(k_max, k);
    const KappaSource kappa = kappa_source(cfg, k_max);

    nlohmann::json jrows = nlohmann::json::array();
    std::string out = "# cellcov.sim_result.v1\n";
    out += "mode,alpha,sigma_db,lambda,lambda_u,K,M,kappa,theta_db,estimate,stderr,runs,discards\n";

    for (int K : cfg.K) {
        for (int M : cfg.M) {
            const double kap = kappa.for_k(K);
            std::vector<SimEstimate> est;
            if (cfg.mode == "plps") {
                const Scheme scheme(K, M, kap);
                if (scheme.kappa_exceeds_k())
                    std::fprintf(stderr, "warning: kappa=%g exceeds K=%d\n", kap, K);
                est = simulate_coverage_curve(model, scheme, thetas, cfg.runs, cfg.seed,
                                              SimOptions{cfg.n_points, cfg.threads});
                if (cfg.dump_realizations > 0)
                    dump_plps_realizations(cfg, model, scheme);
            } else if (cfg.mode == "deployment") {
                est = simulate_deployment_coverage(model, cfg.lambda_u, K, M, thetas, cfg.runs,
                                                   cfg.window, cfg.seed, cfg.threads);
                if (cfg.dump_realizations > 0)
                    dump_deployment_realizations(cfg);
            } else {
                throw std::domain_error("mode must be plps or deployment");
            }
            for (std::size_t t = 0; t < thetas.size(); ++t) {
                out += fmt("%s,%.17g,%.17g,%.17g,%.17g,%d,%d,", cfg.mode.c_str(), cfg.alpha,
                           cfg.sigma_db, cfg.lambda, cfg.lambda_u, K, M);
                out += fmt("%.17g,%.17g,%.17g,%.17g,%lld,%lld\n", kap, thetas_db[t],
                           est[t].value, est[t].stderr_value, est[t].runs, est[t].discards);
                jrows.push_back({{"mode", cfg.mode},
                                 {"K", K},
                                 {"M", M},
                                 {"kappa", kap},
                                 {"theta_db", thetas_db[t]},
                                 {"estimate", est[t].value},
                                 {"stderr", est[t].stderr_value},
                                 {"runs", est[t].runs},
                                 {"discards", est[t].discards}});
            }
        }
    }
    if (cfg.format == "json") {
        nlohmann::json j;
        j["schema"] = "cellcov.sim_result.v1";
        j["rows"] = std::move(jrows);
        write_output(cfg, j.dump() + "\n");
    } else {
        write_output(cfg, out);
    }
    return kExitOk;
}

int run_estimate_load(const RunConfig& cfg) {
    LoadEstimate est = estimate_effective_load_table(cfg.alpha, cfg.lambda, cfg.lambda_u,
                                                     cfg.sigma_db, cfg.K, cfg.load_realizations,
                                                     cfg.window, cfg.seed, cfg.threads);
    if (est.per_k.size() >= 2) {
        est.fit = fit_affine_load(est);
        est.has_fit = true;
    }
    if (cfg.dump_realizations > 0)
        dump_deployment_realizations(cfg);
    write_output(cfg, cfg.format == "json" ? est.to_json() + "\n" : est.to_csv());
    return kExitOk;
}

int run_optimize(const RunConfig& cfg) {
    const Delta delta = Delta::from_alpha(cfg.alpha);
    AffineFit fit;
    if (std::isfinite(cfg.eta0) && std::isfinite(cfg.eta1)) {
        fit = AffineFit{cfg.eta0, cfg.eta1};
    } else if (cfg.kappa == "auto") {
        fit = load_table_cached(cfg, 5).fit;
    } else {
        throw std::domain_error("optimize needs --eta0/--eta1 or --kappa auto");
    }
    const auto rows = optimize_sweep(cfg.theta_grid_linear(), delta, fit, cfg.bound, cfg.epsilon);
    for (const auto& r : rows)
        if (!r.feasible)
            std::fprintf(stderr, "warning: no feasible (K,M) at theta_db=%.3f\n",
                         linear_to_db(r.theta));
    if (cfg.format == "json") {
        nlohmann::json j;
        j["schema"] = "cellcov.optimize_sweep.v1";
        j["eta0"] = fit.eta0;
        j["eta1"] = fit.eta1;
        auto& arr = j["rows"] = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"theta_db", linear_to_db(r.theta)},
                           {"K_star", r.k_star},
                           {"M_star", r.m_star},
                           {"objective", r.objective},
                           {"kappa", r.kappa_used},
                           {"feasible", r.feasible}});
        write_output(cfg, j.dump() + "\n");
    } else {
        write_output(cfg, sweep_to_csv(rows));
    }
    return kExitOk;
}

int run_validate(const RunConfig& cfg) {
    const Delta delta = Delta::from_alpha(cfg.alpha);
    const NetworkModel model(cfg.alpha, cfg.lambda);
    std::string out = "# cellcov validate v1\n";
    out += "check,K,M,kappa,theta_db,sim,stderr,reference,diff,limit,status\n";
    int failures = 0;
    auto emit = [&](const char* check, int K, int M, double kap, double theta_db, double sim,
                    double se, double ref, double limit) {
        const double diff = std::abs(sim - ref);
        const bool ok = diff < limit;
        failures += ok ? 0 : 1;
        out += fmt("%s,%d,%d,%.17g,%.17g,%.17g,%.17g,", check, K, M, kap, theta_db, sim, se);
        out += fmt("%.17g,%.17g,%.17g,%s\n", ref, diff, limit, ok ? "PASS" : "FAIL");
    };

    const SimOptions opt{cfg.n_points, cfg.threads};
    const double thetas[3] = {0.1, 1.0, 10.0};
    for (int K : {1, 2, 3}) {
        for (int M : {1, 2}) {
            for (double kap : {1.0, 2.0}) {
                const Scheme scheme(K, M, kap);
                const auto est = simulate_coverage_curve(model, scheme, thetas, cfg.runs,
                                                         cfg.seed, opt);
                for (int t = 0; t < 3; ++t) {
                    const double ref = coverage_combined(thetas[t], K, M, kap, delta);
                    emit("analytic", K, M, kap, linear_to_db(thetas[t]), est[t].value,
                         est[t].stderr_value, ref, 3.0 * est[t].stderr_value);
                }
            }
        }
    }

    // invariance checks at theta = 1 (independent seeds)
    {
        const Scheme scheme(2, 1, 1.0);
        const auto base = simulate_coverage(model, scheme, 1.0, cfg.runs, cfg.seed + 1, opt);
        const NetworkModel shadowed(cfg.alpha, cfg.lambda, ShadowingSpec::lognormal_db(10.0));
        const auto shadow = simulate_coverage(shadowed, scheme, 1.0, cfg.runs, cfg.seed + 2, opt);
        const NetworkModel dense(cfg.alpha, 2.0 * cfg.lambda);
        const auto dbl = simulate_coverage(dense, scheme, 1.0, cfg.runs, cfg.seed + 3, opt);
        const double se_s = std::sqrt(base.stderr_value * base.stderr_value +
                                      shadow.stderr_value * shadow.stderr_value);
        const double se_d = std::sqrt(base.stderr_value * base.stderr_value +
                                      dbl.stderr_value * dbl.stderr_value);
        emit("shadowing-invariance", 2, 1, 1.0, 0.0, shadow.value, shadow.stderr_value,
             base.value, 3.0 * se_s);
        emit("density-invariance", 2, 1, 1.0, 0.0, dbl.value, dbl.stderr_value, base.value,
             3.0 * se_d);
    }

    out += fmt("RESULT: %s (%d failures)\n", failures == 0 ? "PASS" : "FAIL", failures);
    write_output(cfg, out);
    return failures == 0 ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"coverage analysis for Poisson cellular downlink with BS coordination "
                 "and selection combining"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--alpha", cfg.alpha, "path loss exponent (> 2)");
    app.add_option("--lambda", cfg.lambda, "BS density");
    app.add_option("--lambda-u", cfg.lambda_u, "user density (deployment model)");
    app.add_option("--sigma", cfg.sigma_db, "lognormal shadowing std dev in dB");
    std::string k_text = "1", m_text = "1";
    app.add_option("--K", k_text, "coordination size, single value or a..b");
    app.add_option("--M", m_text, "diversity order, single value or a..b");
    app.add_option("--kappa", cfg.kappa, "effective load (number or 'auto')");
    app.add_option("--theta", cfg.theta, "SIR threshold grid in dB: start:step:stop or value");
    app.add_option("--runs", cfg.runs, "simulation runs / deployment realizations");
    app.add_option("--seed", cfg.seed, "RNG seed");
    app.add_option("--n-points", cfg.n_points, "PLPS truncation");
    app.add_option("--threads", cfg.threads,
                   "worker count, 0 = machine parallelism (results are unaffected)");
    app.add_option("--window", cfg.window, "deployment window side (0 = 30/sqrt(lambda))");
    app.add_option("--load-realizations", cfg.load_realizations,
                   "realizations for --kappa auto estimation");
    app.add_option("--dump-realizations", cfg.dump_realizations,
                   "write the first N realizations as JSON");
    app.add_option("--dump-dir", cfg.dump_dir, "directory for realization dumps");
    app.add_option("--output", cfg.output, "output file (default stdout)");
    app.add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* coverage = app.add_subcommand("coverage", "analytic coverage curves");
    auto* asymptote = app.add_subcommand("asymptote", "asymptotic coefficient tables");
    asymptote->add_option("--regime", cfg.regime, "hr, hse or both");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage");
    simulate->add_option("--mode", cfg.mode, "plps or deployment");
    auto* estimate = app.add_subcommand("estimate-load", "effective load estimation");
    auto* optimize = app.add_subcommand("optimize", "throughput-optimal (K,M) sweep");
    optimize->add_option("--epsilon", [&cfg](const CLI::results_t& res) {
        cfg.epsilon = std::stod(res[0]);
        return true;
    }, "outage constraint in (0,1)");
    optimize->add_option("--eta0", cfg.eta0, "affine load intercept");
    optimize->add_option("--eta1", cfg.eta1, "affine load slope");
    optimize->add_option("--bound", cfg.bound, "search bound for K and M");
    auto* validate = app.add_subcommand("validate", "paired analytic-vs-simulation suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        std::fprintf(stderr, "error: usage: %s\n", e.what());
        return kExitUsage;
    }

    try {
        cfg.K = parse_int_range(k_text);
        cfg.M = parse_int_range(m_text);
        if (cfg.threads <= 0)
            cfg.threads = std::max(1u, std::thread::hardware_concurrency());
        if (coverage->parsed())
            cfg.command = "coverage";
        else if (asymptote->parsed())
            cfg.command = "asymptote";
        else if (simulate->parsed())
            cfg.command = "simulate";
        else if (estimate->parsed())
            cfg.command = "estimate-load";
        else if (optimize->parsed())
            cfg.command = "optimize";
        else if (validate->parsed())
            cfg.command = "validate";

        if (cfg.command == "coverage")
            return run_coverage(cfg);
        if (cfg.command == "asymptote")
            return run_asymptote(cfg);
        if (cfg.command == "simulate")
            return run_simulate(cfg);
        if (cfg.command == "estimate-load")
            return run_estimate_load(cfg);
        if (cfg.command == "optimize")
            return run_optimize(cfg);
        if (cfg.command == "validate")
            return run_validate(cfg);
        std::fprintf(stderr, "error: usage: no subcommand\n");
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: usage: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: numerical: %s\n", e.what());
        return kExitNumerical;
    }
}
