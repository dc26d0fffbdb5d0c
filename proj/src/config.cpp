#include "indicate/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "indicate/errors.hpp"

namespace indicate {

void RunConfig::validate() const {
    if (windows.empty()) throw ValidationError("config: windows list is empty");
    int prev = 0;
    for (const int w : windows) {
        if (w <= prev) throw ValidationError("config: windows must be strictly increasing positive integers");
        prev = w;
    }
    if (horizon < 1) throw ValidationError("config: horizon must be >= 1");
    if (!(spline_lambda >= 0.0)) throw ValidationError("config: spline_lambda must be >= 0");
    if (mc_paths < 1) throw ValidationError("config: mc_paths must be >= 1");
    if (curve_band_samples < 0) throw ValidationError("config: curve_band_samples must be >= 0");
    if (sim_units < 1) throw UsageError("config: sim_units must be >= 1");
    if (sim_window < 1) throw UsageError("config: sim_window must be >= 1");
    mcmc.validate();
    if (!(rho_prior_sd > 0.0) || !(beta_prior_sd > 0.0) || !(delta0_prior_sd > 0.0)) {
        throw ValidationError("config: prior sds must be positive");
    }
    if (!(delta1_gamma_shape > 0.0) || !(delta1_gamma_rate > 0.0)) {
        throw ValidationError("config: delta1 Gamma hyperparameters must be positive");
    }
}

PriorSpec RunConfig::prior(Eigen::Index p) const {
    PriorSpec spec;
    spec.rho_mean = rho_prior_mean;
    spec.rho_sd = rho_prior_sd;
    spec.beta_mean = Eigen::VectorXd::Constant(p, beta_prior_mean);
    spec.beta_cov = Eigen::MatrixXd::Identity(p, p) * (beta_prior_sd * beta_prior_sd);
    spec.delta0_mean = delta0_prior_mean;
    spec.delta0_sd = delta0_prior_sd;
    spec.delta1_gamma_shape = delta1_gamma_shape;
    spec.delta1_gamma_rate = delta1_gamma_rate;
    return spec;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream stream(s);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ValidationError("config: malformed numeric value for key '" + key + "': " + v);
    }
}

int to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ValidationError("config: malformed integer value for key '" + key + "': " + v);
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ValidationError("config: malformed boolean value for key '" + key + "': " + v);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config: expected 'key = value' at " + origin + ":" +
                                  std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "units_file") cfg.units_file = value;
        else if (key == "visits_file") cfg.visits_file = value;
        else if (key == "truth_file") cfg.truth_file = value;
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "baseline_covariates") cfg.baseline_covariates = split_list(value);
        else if (key == "visit_covariates") cfg.visit_covariates = split_list(value);
        else if (key == "windows") {
            cfg.windows.clear();
            for (const auto& item : split_list(value)) cfg.windows.push_back(to_int(item, key));
        }
        else if (key == "horizon") cfg.horizon = to_int(value, key);
        else if (key == "spline_lambda") cfg.spline_lambda = to_double(value, key);
        else if (key == "curve_band_samples") cfg.curve_band_samples = to_int(value, key);
        else if (key == "chains") cfg.mcmc.n_chains = to_int(value, key);
        else if (key == "iterations") cfg.mcmc.n_iters = to_int(value, key);
        else if (key == "burn_in") cfg.mcmc.burn_in = to_int(value, key);
        else if (key == "thin") cfg.mcmc.thin = to_int(value, key);
        else if (key == "seed") cfg.mcmc.seed = static_cast<std::uint64_t>(to_int(value, key));
        else if (key == "delta0_step") cfg.mcmc.delta0_step = to_double(value, key);
        else if (key == "delta1_step") cfg.mcmc.delta1_step = to_double(value, key);
        else if (key == "threads") cfg.mcmc.threads = to_int(value, key);
        else if (key == "rho_prior_mean") cfg.rho_prior_mean = to_double(value, key);
        else if (key == "rho_prior_sd") cfg.rho_prior_sd = to_double(value, key);
        else if (key == "beta_prior_mean") cfg.beta_prior_mean = to_double(value, key);
        else if (key == "beta_prior_sd") cfg.beta_prior_sd = to_double(value, key);
        else if (key == "delta0_prior_mean") cfg.delta0_prior_mean = to_double(value, key);
        else if (key == "delta0_prior_sd") cfg.delta0_prior_sd = to_double(value, key);
        else if (key == "delta1_gamma_shape") cfg.delta1_gamma_shape = to_double(value, key);
        else if (key == "delta1_gamma_rate") cfg.delta1_gamma_rate = to_double(value, key);
        else if (key == "mc_paths") cfg.mc_paths = to_int(value, key);
        else if (key == "dic_max_draws") cfg.dic_max_draws = to_int(value, key);
        else if (key == "skip_matching") cfg.skip_matching = to_bool(value, key);
        else if (key == "sim_units") cfg.sim_units = to_int(value, key);
        else if (key == "sim_window") cfg.sim_window = to_int(value, key);
        else if (key == "sim_demo") cfg.sim_demo = to_bool(value, key);
        else throw ValidationError("config: unknown key '" + key + "' at " + origin + ":" +
                                   std::to_string(line_no));
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), path);
}

}  // namespace indicate
