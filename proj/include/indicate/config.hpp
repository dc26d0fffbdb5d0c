#pragma once

// Flat `key = value` run configuration with `#` comments; lists are
// comma-separated. Every pipeline command reads the same file.

#include <string>
#include <vector>

#include "indicate/model.hpp"
#include "indicate/sampler.hpp"
#include "indicate/synth.hpp"

namespace indicate {

struct RunConfig {
    std::string units_file = "data/units.csv";
    std::string visits_file = "data/visits.csv";
    std::string truth_file = "data/truth.csv";
    std::string out_dir = "out";

    std::vector<std::string> baseline_covariates;  // empty: use all x0_* columns
    std::vector<std::string> visit_covariates;     // empty: use all v_* columns

    std::vector<int> windows = {14, 30, 60, 90, 120, 180, 270, 365};
    int horizon = 365;
    double spline_lambda = 50.0;
    int curve_band_samples = 200;

    McmcConfig mcmc;
    double rho_prior_mean = 0.0;
    double rho_prior_sd = 0.5;
    double beta_prior_mean = 0.0;
    double beta_prior_sd = 2.0;
    double delta0_prior_mean = 0.0;
    double delta0_prior_sd = 2.0;
    double delta1_gamma_shape = 1.0;
    double delta1_gamma_rate = 20.0;

    int mc_paths = 200;     // likelihood Monte Carlo paths (DIC)
    int dic_max_draws = 200;
    bool skip_matching = false;

    // simulate command
    int sim_units = 1000;
    int sim_window = 365;
    bool sim_demo = false;  // ignore sim_* knobs and emit the demo cohort

    void validate() const;
    PriorSpec prior(Eigen::Index p) const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

}  // namespace indicate
