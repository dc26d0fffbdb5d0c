#pragma once

// Deterministic core of the latent-state indication-time model. A subject's
// unexplained health follows a stationary AR(1) state with unit innovation
// variance; a daily binary indication process fires with probit probability
// Phi(theta_t + x_t' beta); the indication time is the first day the process
// fires; treatment is then assigned with probability invlogit(delta0 +
// delta1 * D), D exogenous (calendar time at entry) and delta1 <= 0.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "indicate/cohort.hpp"

namespace indicate {

struct ModelParams {
    double rho = 0.0;  // AR(1) coefficient, |rho| < 1
    Eigen::VectorXd beta;
    double delta0 = 0.0;
    double delta1 = 0.0;  // restricted <= 0

    void validate() const;
};

// Hyperparameters: truncated normal on rho over (-1, 1), multivariate normal
// on beta, normal on delta0, Gamma on -delta1.
struct PriorSpec {
    double rho_mean = 0.0;
    double rho_sd = 0.5;
    Eigen::VectorXd beta_mean;
    Eigen::MatrixXd beta_cov;
    double delta0_mean = 0.0;
    double delta0_sd = 2.0;
    double delta1_gamma_shape = 1.0;
    double delta1_gamma_rate = 20.0;

    static PriorSpec defaults(Eigen::Index p);
    void validate() const;
};

// P(indication fires | theta_t, x_t) = Phi(theta_t + x_t' beta).
double indication_prob(double theta_t, const Eigen::VectorXd& x_t, const Eigen::VectorXd& beta);

// First index (1-based day) with psi = 1; nullopt when the process never fires.
std::optional<int> hitting_time(const std::vector<std::uint8_t>& psi);

// P(Z = 1 | T, D). T enters through the general assignment form but the
// implemented specialization is affine in D only.
double assignment_prob(int T, double D, double delta0, double delta1);

// Distribution of the hitting time over {1..K, censored} conditional on a
// latent path. day(t-1) = P(T = t | theta); entries sum to one.
struct HittingPmf {
    Eigen::VectorXd day;
    double censored = 0.0;

    int window() const { return static_cast<int>(day.size()); }
    double total() const { return day.sum() + censored; }
};

// `design` holds one covariate row per day 0..K (day 0 unused: the
// indication process starts at day 1); `theta` is indexed the same way.
HittingPmf hitting_pmf_given_path(const Eigen::VectorXd& theta, const Eigen::MatrixXd& design,
                                  const Eigen::VectorXd& beta, int K);

// Marginal log likelihood of one unit under the study window K, with the
// latent path integrated out by seeded Monte Carlo over prior AR(1) draws
// (common random numbers: the same seed reuses the same paths for any
// parameter value). Treated units observed inside the window contribute
// p(T) * pi; treated units whose indication falls beyond the window
// contribute the in-window censoring mass; untreated units contribute the
// full missing-data mixture.
double unit_loglik(const CohortUnit& unit, const Eigen::MatrixXd& design, const ModelParams& params,
                   int K, int mc_paths, std::uint64_t seed);

// Same computation from bare fields (treated flag, observed indication day,
// exogenous assignment covariate D).
double unit_loglik(bool treated, std::optional<int> indication_day, double D, const std::string& unit_id,
                   const Eigen::MatrixXd& design, const ModelParams& params, int K, int mc_paths,
                   std::uint64_t seed);

}  // namespace indicate
