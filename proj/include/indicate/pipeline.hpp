#pragma once

// End-to-end commands behind the CLI: simulate, validate, match, fit,
// report, rsm, diagnose. All tabular outputs live under the configured
// output directory; per-window fit artifacts go to <out_dir>/<K>/.

#include <string>
#include <vector>

#include "indicate/config.hpp"
#include "indicate/effects.hpp"
#include "indicate/matching.hpp"
#include "indicate/sampler.hpp"

namespace indicate {

struct FitWindowSummary {
    int window = 0;
    double max_rhat = 0.0;   // NaN when only one chain
    double delta_accept = 0.0;
    double dic = 0.0;
    double p_d = 0.0;
};

struct FitSummary {
    std::vector<FitWindowSummary> windows;
    bool rhat_available = false;
    double max_rhat = 0.0;
    bool converged = true;  // all R-hat <= 1.1 (vacuously true without R-hat)
};

void cmd_simulate(const RunConfig& config);
void cmd_validate(const RunConfig& config);
MatchResult cmd_match(const RunConfig& config);
FitSummary cmd_fit(const RunConfig& config);
void cmd_report(const RunConfig& config);
std::vector<RsmRow> cmd_rsm(const RunConfig& config);
void cmd_diagnose(const RunConfig& config);

// Shared plumbing, exposed for tests and the python bindings.
Cohort load_configured_cohort(const RunConfig& config);
std::vector<CohortUnit> build_pool(const RunConfig& config, const Cohort& cohort);
void write_draws(const PosteriorDraws& draws, const std::string& dir);
PosteriorDraws read_draws(const std::string& dir, int K);

}  // namespace indicate
