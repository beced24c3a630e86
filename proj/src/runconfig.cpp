#include "cellcov/runconfig.hpp"

#include <stdexcept>

#include "json.hpp"

namespace cellcov {

std::vector<int> parse_int_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int v = std::stoi(text);
            if (v < 1)
                throw std::domain_error("range values must be positive");
            return {v};
        }
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        if (lo < 1 || hi < lo)
            throw std::domain_error("bad range bounds");
        std::vector<int> out;
        for (int v = lo; v <= hi; ++v)
            out.push_back(v);
        return out;
    } catch (const std::invalid_argument&) {
        throw std::domain_error("cannot parse integer range '" + text + "'");
    }
}

std::vector<double> parse_db_range(const std::string& text) {
    const auto c1 = text.find(':');
    try {
        if (c1 == std::string::npos)
            return {std::stod(text)};
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw std::domain_error("theta range needs start:step:stop");
        const double start = std::stod(text.substr(0, c1));
        const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        const double stop = std::stod(text.substr(c2 + 1));
        if (!(step > 0.0) || stop < start)
            throw std::domain_error("bad theta range");
        std::vector<double> out;
        // inclusive grid with a half-step guard against rounding
        for (double v = start; v <= stop + 0.5 * step; v += step)
            out.push_back(v);
        if (!out.empty() && out.back() > stop + 1e-9)
            out.pop_back();
        return out;
    } catch (const std::invalid_argument&) {
        throw std::domain_error("cannot parse theta range '" + text + "'");
    }
}

std::vector<double> RunConfig::theta_grid_db() const { return parse_db_range(theta); }

std::vector<double> RunConfig::theta_grid_linear() const {
    std::vector<double> out = parse_db_range(theta);
    for (double& v : out)
        v = db_to_linear(v);
    return out;
}

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["alpha"] = alpha;
    j["lambda"] = lambda;
    j["lambda_u"] = lambda_u;
    j["sigma_db"] = sigma_db;
    j["K"] = K;
    j["M"] = M;
    j["kappa"] = kappa;
    j["theta"] = theta;
    j["regime"] = regime;
    j["mode"] = mode;
    j["runs"] = runs;
    j["load_realizations"] = load_realizations;
    j["window"] = window;
    if (std::isfinite(eta0))
        j["eta0"] = eta0;
    if (std::isfinite(eta1))
        j["eta1"] = eta1;
    if (epsilon)
        j["epsilon"] = *epsilon;
    j["bound"] = bound;
    j["n_points"] = n_points;
    j["threads"] = threads;
    j["seed"] = seed;
    j["dump_realizations"] = dump_realizations;
    j["dump_dir"] = dump_dir;
    j["output"] = output;
    j["format"] = format;
    return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.alpha = j.at("alpha").get<double>();
    c.lambda = j.at("lambda").get<double>();
    c.lambda_u = j.at("lambda_u").get<double>();
    c.sigma_db = j.at("sigma_db").get<double>();
    c.K = j.at("K").get<std::vector<int>>();
    c.M = j.at("M").get<std::vector<int>>();
    c.kappa = j.at("kappa").get<std::string>();
    c.theta = j.at("theta").get<std::string>();
    c.regime = j.at("regime").get<std::string>();
    c.mode = j.at("mode").get<std::string>();
    c.runs = j.at("runs").get<long long>();
    c.load_realizations = j.at("load_realizations").get<long long>();
    c.window = j.at("window").get<double>();
    if (j.contains("eta0"))
        c.eta0 = j.at("eta0").get<double>();
    if (j.contains("eta1"))
        c.eta1 = j.at("eta1").get<double>();
    if (j.contains("epsilon"))
        c.epsilon = j.at("epsilon").get<double>();
    c.bound = j.at("bound").get<int>();
    c.n_points = j.at("n_points").get<int>();
    c.threads = j.at("threads").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.dump_realizations = j.at("dump_realizations").get<int>();
    c.dump_dir = j.at("dump_dir").get<std::string>();
    c.output = j.at("output").get<std::string>();
    c.format = j.at("format").get<std::string>();
    return c;
}

} // namespace cellcov
