#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cellcov {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// "a..b" or "a" -> inclusive integer list.
std::vector<int> parse_int_range(const std::string& text);

// "start:step:stop" (dB) or a single value -> inclusive dB grid.
std::vector<double> parse_db_range(const std::string& text);

// Parsed command-line configuration. theta is carried in dB and converted to
// linear exactly once, when the grid is materialized.
struct RunConfig {
    std::string command;        // coverage|asymptote|simulate|estimate-load|optimize|validate
    double alpha = 4.0;
    double lambda = 1.0;
    double lambda_u = 10.0;
    double sigma_db = 0.0;
    std::vector<int> K{1};
    std::vector<int> M{1};
    std::string kappa = "1";    // numeric literal or "auto"
    std::string theta = "-10:0.5:20";
    std::string regime = "both";   // asymptote: hr|hse|both
    std::string mode = "plps";     // simulate: plps|deployment
    long long runs = 100000;
    long long load_realizations = 200;
    double window = 0.0;           // 0 -> default 30/sqrt(lambda)
    double eta0 = std::numeric_limits<double>::quiet_NaN();
    double eta1 = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> epsilon;
    int bound = 20;
    int n_points = 2000;
    int threads = 0; // 0 = machine parallelism
    std::uint64_t seed = 1;
    int dump_realizations = 0;
    std::string dump_dir = ".";
    std::string output;            // empty -> stdout
    std::string format = "csv";    // csv|json

    std::vector<double> theta_grid_linear() const;
    std::vector<double> theta_grid_db() const;

    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
};

} // namespace cellcov
