#pragma once

// Gibbs sampler over (W, theta, beta, rho, T_mis, delta). Probit
// augmentation turns the daily indication process into truncated-normal
// utilities W, after which the latent path update is an exact
// forward-filter backward-sample draw and the beta/rho updates are
// conjugate. Missing indication times are imputed by an exact categorical
// draw conditional on the path; the assignment block (delta0, delta1) uses
// joint random-walk Metropolis with burn-in-only step adaptation.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "indicate/cohort.hpp"
#include "indicate/model.hpp"
#include "indicate/rng.hpp"

namespace indicate {

struct McmcConfig {
    int n_chains = 4;
    int n_iters = 20000;
    int burn_in = 5000;
    int thin = 1;
    std::uint64_t seed = 1;
    int study_window = 365;  // K
    double delta0_step = 0.25;
    double delta1_step = 0.25;  // on log(-delta1)
    int threads = 1;

    void validate() const;
};

struct ChainDraws {
    std::vector<int> iters;  // original iteration numbers of kept draws
    Eigen::MatrixXd params;  // kept draws x (rho, delta0, delta1, beta_1..beta_p)
    Eigen::Matrix<std::int16_t, Eigen::Dynamic, Eigen::Dynamic> t_mis;  // kept draws x untreated, -1 = censored
    Eigen::VectorXi n0;      // per-draw count of imputed T <= K
    double delta_accept_rate = 0.0;

    Eigen::Index n_draws() const { return params.rows(); }
};

struct PosteriorDraws {
    int K = 0;
    std::vector<std::string> beta_names;
    std::vector<std::string> untreated_ids;  // column order of t_mis
    std::vector<ChainDraws> chains;

    std::size_t total_draws() const;
    ModelParams mean_params() const;
};

// One pool unit prepared for fitting: design on the daily grid, the
// observed hit day when it falls inside the window, and the last day an
// indication could have occurred (alive, under follow-up).
struct FitUnit {
    std::string unit_id;
    bool treated = false;
    std::optional<int> hit_day;  // observed indication day if treated and <= K
    double D = 0.0;
    int last_candidate = 0;
    int path_len = 0;  // latent path spans 0..path_len
    Eigen::MatrixXd design;
    // Row t: lower-triangle prefix sum of x_s x_s' over days s = 1..t, so
    // the beta update can read off X'X for any utility length.
    Eigen::MatrixXd xtx_prefix;
};

struct FitData {
    int K = 0;
    Eigen::Index p = 0;
    std::vector<FitUnit> units;          // sorted by unit_id
    std::vector<std::size_t> untreated;  // indices into units
    std::vector<std::string> untreated_ids;
    std::vector<std::string> beta_names;
};

FitData prepare_fit_data(std::span<const CohortUnit> pool, const Standardization& standardization, int K,
                         const std::vector<std::string>& baseline_names = {},
                         const std::vector<std::string>& visit_names = {});

// --- Gibbs kernels -------------------------------------------------------

// Truncated-normal utilities for days 1..min(T, K): negative strictly
// before the hit day, non-negative at it. T = nullopt means no hit inside
// the window (all K utilities negative).
Eigen::VectorXd sample_utilities(const Eigen::VectorXd& theta, const Eigen::MatrixXd& design,
                                 const Eigen::VectorXd& beta, std::optional<int> T, int K, Rng& rng);

// Exact joint draw of theta_0..theta_path_len given utilities W (observed
// on days 1..W.size(); later days use pure state prediction).
Eigen::VectorXd ffbs_theta(const Eigen::VectorXd& W, const Eigen::MatrixXd& design,
                           const Eigen::VectorXd& beta, double rho, int path_len, Rng& rng);

// Conjugate multivariate-normal draw for beta from stacked regression rows
// X and residual targets r = W - theta (unit noise).
Eigen::VectorXd sample_beta(const Eigen::MatrixXd& X, const Eigen::VectorXd& resid, const PriorSpec& prior,
                            Rng& rng);
Eigen::VectorXd sample_beta_suffstats(const Eigen::MatrixXd& xtx, const Eigen::VectorXd& xtr,
                                      const PriorSpec& prior, Rng& rng);

// Conjugate normal draw for rho from the lag-1 regression of the stored
// latent paths, truncated to (-1, 1).
double sample_rho_suffstats(double sum_lag_sq, double sum_cross, const PriorSpec& prior, Rng& rng);
double sample_rho(const std::vector<Eigen::VectorXd>& paths, const PriorSpec& prior, Rng& rng);

struct DeltaRecord {
    int T = 0;
    double D = 0.0;
    bool Z = false;
};

struct DeltaState {
    double delta0 = 0.0;
    double delta1 = -0.05;
};

// One random-walk Metropolis move on (delta0, log(-delta1)). With no
// records the conditional is the prior and is drawn exactly.
DeltaState sample_delta(const std::vector<DeltaRecord>& records, const PriorSpec& prior, DeltaState current,
                        double step0, double step1, Rng& rng, bool* accepted = nullptr);

// Categorical draw of a missing indication time over eligible days 1..K
// and the censored outcome, with weights p(T=t|theta) * (1 - pi_t) and
// p(censored|theta). Days after death or follow-up end are excluded.
std::optional<int> impute_indication_time(const FitUnit& unit, const Eigen::VectorXd& theta,
                                          const ModelParams& params, int K, Rng& rng);

// --- Chain drivers -------------------------------------------------------

// Test hook: a view of the full sampler state at the end of an iteration.
struct ChainStateView {
    const ModelParams& params;
    const std::vector<Eigen::VectorXd>& W;
    const std::vector<Eigen::VectorXd>& theta;
    const std::vector<std::optional<int>>& t_mis;  // aligned with FitData::untreated
    int iteration;
};
using ChainObserver = std::function<void(const ChainStateView&)>;

ChainDraws run_chain(const FitData& fit, const McmcConfig& config, const PriorSpec& prior, int chain_index,
                     const ChainObserver& observer = {});

// Runs config.n_chains chains (in parallel up to config.threads) and
// collects their draws. Deterministic given (seed, chain count) for any
// thread count.
PosteriorDraws run_chains(const FitData& fit, const McmcConfig& config, const PriorSpec& prior,
                          const ChainObserver& observer = {});

// --- Model fit score ------------------------------------------------------

struct DicResult {
    double dic = 0.0;
    double p_d = 0.0;
    double d_bar = 0.0;
    double d_at_mean = 0.0;
    int n_draws_used = 0;
};

// Deviance information criterion over stored draws (optionally a strided
// subset of max_draws), with common random numbers across all deviance
// evaluations.
DicResult dic(const PosteriorDraws& draws, const FitData& fit, int mc_paths, std::uint64_t seed,
              int max_draws = 0);

}  // namespace indicate
