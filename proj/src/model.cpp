#include "indicate/model.hpp"

#include <algorithm>
#include <cmath>

#include "indicate/errors.hpp"
#include "indicate/normal.hpp"
#include "indicate/rng.hpp"

namespace indicate {

namespace {

// Streaming log-sum-exp accumulator.
class LogSumExp {
public:
    void add(double x) {
        if (x == -std::numeric_limits<double>::infinity()) return;
        if (x > max_) {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        } else {
            sum_ += std::exp(x - max_);
        }
    }

    double value() const {
        if (sum_ <= 0.0) return -std::numeric_limits<double>::infinity();
        return max_ + std::log(sum_);
    }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

inline double clamp_probit(double z) {
    return std::clamp(z, -kProbitClamp, kProbitClamp);
}

}  // namespace

void ModelParams::validate() const {
    if (!(std::abs(rho) < 1.0)) throw ValidationError("rho must lie in (-1, 1)");
    if (!(delta1 <= 0.0)) throw ValidationError("delta1 must be <= 0");
    if (!beta.allFinite()) throw ValidationError("beta has non-finite entries");
    if (!std::isfinite(delta0)) throw ValidationError("delta0 is not finite");
}

PriorSpec PriorSpec::defaults(Eigen::Index p) {
    PriorSpec spec;
    spec.beta_mean = Eigen::VectorXd::Zero(p);
    spec.beta_cov = Eigen::MatrixXd::Identity(p, p) * 4.0;
    return spec;
}

void PriorSpec::validate() const {
    if (!(rho_sd > 0.0) || !(delta0_sd > 0.0)) throw ValidationError("prior sds must be positive");
    if (!(delta1_gamma_shape > 0.0) || !(delta1_gamma_rate > 0.0)) {
        throw ValidationError("Gamma hyperparameters for delta1 must be positive");
    }
    if (beta_mean.size() != beta_cov.rows() || beta_cov.rows() != beta_cov.cols()) {
        throw ValidationError("beta prior dimensions disagree");
    }
    if (beta_cov.size() > 0) {
        Eigen::LLT<Eigen::MatrixXd> llt(beta_cov);
        if (llt.info() != Eigen::Success) throw ValidationError("beta prior covariance not positive-definite");
    }
}

double indication_prob(double theta_t, const Eigen::VectorXd& x_t, const Eigen::VectorXd& beta) {
    if (x_t.size() != beta.size()) throw ValidationError("indication_prob: dimension mismatch");
    return norm_cdf(clamp_probit(theta_t + x_t.dot(beta)));
}

std::optional<int> hitting_time(const std::vector<std::uint8_t>& psi) {
    for (std::size_t t = 0; t < psi.size(); ++t) {
        if (psi[t]) return static_cast<int>(t) + 1;
    }
    return std::nullopt;
}

double assignment_prob(int /*T*/, double D, double delta0, double delta1) {
    return invlogit(delta0 + delta1 * D);
}

HittingPmf hitting_pmf_given_path(const Eigen::VectorXd& theta, const Eigen::MatrixXd& design,
                                  const Eigen::VectorXd& beta, int K) {
    if (theta.size() < K + 1) throw ValidationError("hitting_pmf_given_path: path shorter than window");
    if (design.rows() < K + 1) throw ValidationError("hitting_pmf_given_path: design shorter than window");

    HittingPmf pmf;
    pmf.day = Eigen::VectorXd::Zero(K);
    double log_surv = 0.0;
    for (int t = 1; t <= K; ++t) {
        const double z = clamp_probit(theta(t) + design.row(t).dot(beta));
        double log_q, log_1mq;
        probit_logs(z, log_q, log_1mq);
        pmf.day(t - 1) = std::exp(log_surv + log_q);
        log_surv += log_1mq;
        if (log_surv < -746.0) break;  // survivor mass underflowed; the rest is exactly zero
    }
    pmf.censored = std::exp(log_surv);
    return pmf;
}

double unit_loglik(const CohortUnit& unit, const Eigen::MatrixXd& design, const ModelParams& params,
                   int K, int mc_paths, std::uint64_t seed) {
    return unit_loglik(unit.treated, unit.indication_day, unit.calendar_entry(), unit.unit_id, design,
                       params, K, mc_paths, seed);
}

double unit_loglik(bool treated, std::optional<int> indication_day, double D, const std::string& unit_id,
                   const Eigen::MatrixXd& design, const ModelParams& params, int K, int mc_paths,
                   std::uint64_t seed) {
    if (mc_paths < 1) throw ValidationError("unit_loglik: mc_paths must be >= 1");
    if (design.rows() < K + 1) throw ValidationError("unit_loglik: design shorter than window");

    if (treated && !indication_day) {
        throw ValidationError("treated unit without indication_day: " + unit_id);
    }
    const int obs_T = treated ? *indication_day : -1;
    if (treated && obs_T == 0) {
        throw ValidationError("indication at day 0 has zero probability under the daily model (unit " +
                              unit_id + ")");
    }

    // Precompute x_t' beta once per day.
    Eigen::VectorXd xb = Eigen::VectorXd::Zero(K + 1);
    if (params.beta.size() > 0) {
        xb = design.topRows(K + 1) * params.beta;
    }

    // Monte Carlo over prior latent paths with common random numbers: the
    // raw innovations depend only on (seed, K, mc_paths), so the result is
    // a smooth function of the parameters for a fixed seed.
    Rng rng(seed);
    std::vector<LogSumExp> lse(static_cast<std::size_t>(K) + 1);  // days 1..K then censored
    for (int m = 0; m < mc_paths; ++m) {
        double theta = rng.normal();  // theta_0
        double log_surv = 0.0;
        for (int t = 1; t <= K; ++t) {
            theta = params.rho * theta + rng.normal();
            const double z = clamp_probit(theta + xb(t));
            double log_q, log_1mq;
            probit_logs(z, log_q, log_1mq);
            lse[t - 1].add(log_surv + log_q);
            log_surv += log_1mq;
        }
        lse[K].add(log_surv);
    }
    const double log_m = std::log(static_cast<double>(mc_paths));

    const double link = params.delta0 + params.delta1 * D;
    double loglik;
    if (treated && obs_T <= K) {
        loglik = lse[obs_T - 1].value() - log_m + log_invlogit(link);
    } else if (treated) {
        // Indication observed beyond the window: within the window the unit
        // is known not to have hit, and assignment happened outside it.
        loglik = lse[K].value() - log_m;
    } else {
        LogSumExp mix;
        for (int t = 1; t <= K; ++t) {
            mix.add(lse[t - 1].value() - log_m + log1m_invlogit(link));
        }
        mix.add(lse[K].value() - log_m);
        loglik = mix.value();
    }

    if (!std::isfinite(loglik)) {
        throw NumericError("unit_loglik: non-finite result for unit " + unit_id);
    }
    return loglik;
}

}  // namespace indicate
