#include "indicate/matching.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "indicate/errors.hpp"

namespace indicate {

double mahalanobis(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& cov_inv) {
    if (x.size() != y.size() || cov_inv.rows() != x.size() || cov_inv.cols() != x.size()) {
        throw ValidationError("mahalanobis: dimension mismatch");
    }
    const Eigen::VectorXd d = x - y;
    const double q = d.dot(cov_inv * d);
    if (q < -1e-9) throw NumericError("mahalanobis: matrix is not positive-definite");
    return std::sqrt(std::max(q, 0.0));
}

namespace {

Eigen::MatrixXd pooled_covariance(const Eigen::MatrixXd& treated, const Eigen::MatrixXd& controls) {
    const Eigen::Index p = treated.cols();
    const Eigen::Index n = treated.rows() + controls.rows();
    Eigen::MatrixXd all(n, p);
    all.topRows(treated.rows()) = treated;
    all.bottomRows(controls.rows()) = controls;
    const Eigen::RowVectorXd mean = all.colwise().mean();
    const Eigen::MatrixXd centered = all.rowwise() - mean;
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    return centered.transpose() * centered / denom;
}

}  // namespace

MatchResult nn_match(const BaselineSet& treated, const BaselineSet& controls) {
    if (treated.ids.empty() || controls.ids.empty()) {
        throw ValidationError("nn_match requires at least one treated and one control unit");
    }
    if (treated.rows.cols() != controls.rows.cols()) {
        throw ValidationError("nn_match: covariate dimensions disagree");
    }

    MatchResult result;
    result.pooled_covariance = pooled_covariance(treated.rows, controls.rows);

    const Eigen::Index p = result.pooled_covariance.rows();
    Eigen::MatrixXd cov = result.pooled_covariance;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        const double ridge = 1e-6 * cov.diagonal().mean();
        cov += Eigen::MatrixXd::Identity(p, p) * ridge;
        llt.compute(cov);
        if (llt.info() != Eigen::Success) {
            throw NumericError("nn_match: pooled covariance singular after regularization");
        }
    }
    result.covariance_inverse = llt.solve(Eigen::MatrixXd::Identity(p, p));

    // Treated units processed in id order so the output is deterministic.
    std::vector<std::size_t> treated_order(treated.ids.size());
    for (std::size_t i = 0; i < treated_order.size(); ++i) treated_order[i] = i;
    std::sort(treated_order.begin(), treated_order.end(),
              [&](std::size_t a, std::size_t b) { return treated.ids[a] < treated.ids[b]; });

    std::set<std::string> retained;
    for (const std::size_t i : treated_order) {
        const Eigen::VectorXd x = treated.rows.row(static_cast<Eigen::Index>(i));
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = 0;
        for (std::size_t j = 0; j < controls.ids.size(); ++j) {
            const double d = mahalanobis(x, controls.rows.row(static_cast<Eigen::Index>(j)), result.covariance_inverse);
            if (d < best || (d == best && controls.ids[j] < controls.ids[best_j])) {
                best = d;
                best_j = j;
            }
        }
        result.pairs.push_back({treated.ids[i], controls.ids[best_j], best});
        retained.insert(controls.ids[best_j]);
    }
    result.retained_controls.assign(retained.begin(), retained.end());
    return result;
}

std::vector<BalanceRow> balance_table(const std::vector<std::string>& names, const Eigen::MatrixXd& treated,
                                      const Eigen::MatrixXd& matched_controls) {
    if (treated.rows() == 0 || matched_controls.rows() == 0) {
        throw ValidationError("balance_table: both groups must be non-empty");
    }
    if (treated.cols() != matched_controls.cols()) {
        throw ValidationError("balance_table: covariate dimensions disagree");
    }

    std::vector<BalanceRow> out;
    for (Eigen::Index j = 0; j < treated.cols(); ++j) {
        BalanceRow row;
        row.covariate = j < static_cast<Eigen::Index>(names.size()) ? names[j] : "covariate_" + std::to_string(j + 1);
        row.mean_treated = treated.col(j).mean();
        row.mean_control = matched_controls.col(j).mean();

        auto sample_var = [](const Eigen::VectorXd& v) {
            if (v.size() < 2) return 0.0;
            const double m = v.mean();
            return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
        };
        const double pooled = std::sqrt(0.5 * (sample_var(treated.col(j)) + sample_var(matched_controls.col(j))));
        row.smd = pooled > 0.0 ? (row.mean_treated - row.mean_control) / pooled
                               : std::numeric_limits<double>::quiet_NaN();
        out.push_back(row);
    }
    return out;
}

}  // namespace indicate
