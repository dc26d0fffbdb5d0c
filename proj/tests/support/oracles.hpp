#pragma once

// Test-side oracles, independent of the library's computation paths.

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace oracles {

// Joint covariance of (theta_0 .. theta_K) under theta_0 ~ N(0,1),
// theta_t = rho theta_{t-1} + N(0,1), built by direct recursion.
inline Eigen::MatrixXd ar1_joint_covariance(double rho, int K) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(K + 1, K + 1);
    cov(0, 0) = 1.0;
    for (int t = 1; t <= K; ++t) {
        for (int j = 0; j < t; ++j) {
            cov(t, j) = rho * cov(t - 1, j);
            cov(j, t) = cov(t, j);
        }
        cov(t, t) = rho * rho * cov(t - 1, t - 1) + 1.0;
    }
    return cov;
}

struct GaussianConditional {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

// Exact conditional of theta_{0..K} given utilities W_t = theta_t + m_t + e_t
// (unit noise) on the 1-based days listed in `observed`.
inline GaussianConditional condition_ar1_on_utilities(double rho, int K,
                                                      const std::vector<int>& observed,
                                                      const Eigen::VectorXd& W,
                                                      const Eigen::VectorXd& shift) {
    const Eigen::MatrixXd prior = ar1_joint_covariance(rho, K);
    const int n_obs = static_cast<int>(observed.size());
    Eigen::MatrixXd cross(K + 1, n_obs);       // Cov(theta, W)
    Eigen::MatrixXd obs_cov(n_obs, n_obs);     // Cov(W, W)
    for (int a = 0; a < n_obs; ++a) {
        for (int i = 0; i <= K; ++i) cross(i, a) = prior(i, observed[static_cast<std::size_t>(a)]);
        for (int b = 0; b < n_obs; ++b) {
            obs_cov(a, b) = prior(observed[static_cast<std::size_t>(a)], observed[static_cast<std::size_t>(b)]);
        }
        obs_cov(a, a) += 1.0;
    }
    const Eigen::VectorXd centered = W - shift;
    const Eigen::MatrixXd gain = cross * obs_cov.inverse();
    GaussianConditional out;
    out.mean = gain * centered;
    out.cov = prior - gain * cross.transpose();
    return out;
}

struct MomentStats {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    int n = 0;
};

inline MomentStats sample_moments(const std::vector<Eigen::VectorXd>& draws) {
    MomentStats out;
    out.n = static_cast<int>(draws.size());
    const Eigen::Index d = draws.front().size();
    out.mean = Eigen::VectorXd::Zero(d);
    for (const auto& x : draws) out.mean += x;
    out.mean /= static_cast<double>(out.n);
    out.cov = Eigen::MatrixXd::Zero(d, d);
    for (const auto& x : draws) {
        const Eigen::VectorXd c = x - out.mean;
        out.cov += c * c.transpose();
    }
    out.cov /= static_cast<double>(out.n - 1);
    return out;
}

}  // namespace oracles
