#pragma once

// Baseline comparability: 1:1 nearest-neighbor Mahalanobis matching with
// replacement, plus standardized-mean-difference balance summaries.

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace indicate {

struct BaselineSet {
    std::vector<std::string> ids;
    Eigen::MatrixXd rows;  // one baseline vector per id
};

struct MatchPair {
    std::string treated_id;
    std::string control_id;
    double distance = 0.0;
};

struct MatchResult {
    std::vector<MatchPair> pairs;             // one per treated unit, treated-id order
    Eigen::MatrixXd pooled_covariance;
    Eigen::MatrixXd covariance_inverse;
    std::vector<std::string> retained_controls;  // deduplicated, sorted
};

struct BalanceRow {
    std::string covariate;
    double mean_treated = 0.0;
    double mean_control = 0.0;
    double smd = 0.0;  // NaN when the pooled sd is zero
};

double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& cov_inv);

// Matches every treated unit to its closest control under the Mahalanobis
// metric of the pooled covariance (ridge-regularized if near singular).
// Ties go to the smallest control id; controls may repeat.
MatchResult nn_match(const BaselineSet& treated, const BaselineSet& controls);

std::vector<BalanceRow> balance_table(const std::vector<std::string>& names, const Eigen::MatrixXd& treated,
                                      const Eigen::MatrixXd& matched_controls);

}  // namespace indicate
