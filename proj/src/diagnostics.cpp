#include "indicate/diagnostics.hpp"

#include <cmath>

#include "indicate/errors.hpp"

namespace indicate {

double spectral_variance(const Eigen::VectorXd& segment) {
    const Eigen::Index n = segment.size();
    if (n < 2) throw DiagnosticError("spectral_variance: segment too short");
    const double mean = segment.mean();
    const Eigen::VectorXd centered = segment.array() - mean;

    const Eigen::Index max_lag = std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(std::sqrt(static_cast<double>(n))));
    double s0 = centered.squaredNorm() / static_cast<double>(n);  // gamma_0
    for (Eigen::Index k = 1; k <= max_lag; ++k) {
        const double gamma_k = centered.head(n - k).dot(centered.tail(n - k)) / static_cast<double>(n);
        const double w = 1.0 - static_cast<double>(k) / static_cast<double>(max_lag + 1);
        s0 += 2.0 * w * gamma_k;
    }
    return s0 / static_cast<double>(n);
}

double geweke_z(const Eigen::VectorXd& chain, double frac_a, double frac_b) {
    const Eigen::Index n = chain.size();
    if (n < 100) throw DiagnosticError("geweke_z: chain shorter than 100 draws");
    if (!(frac_a > 0.0) || !(frac_b > 0.0) || frac_a + frac_b > 1.0) {
        throw DiagnosticError("geweke_z: invalid segment fractions");
    }
    const Eigen::Index na = static_cast<Eigen::Index>(std::floor(frac_a * static_cast<double>(n)));
    const Eigen::Index nb = static_cast<Eigen::Index>(std::floor(frac_b * static_cast<double>(n)));
    const Eigen::VectorXd a = chain.head(na);
    const Eigen::VectorXd b = chain.tail(nb);

    const double va = spectral_variance(a);
    const double vb = spectral_variance(b);
    if (!(va + vb > 0.0)) {
        throw DiagnosticError("geweke_z: zero spectral variance (constant chain)");
    }
    return (a.mean() - b.mean()) / std::sqrt(va + vb);
}

double gelman_rubin(const std::vector<Eigen::VectorXd>& chains) {
    const std::size_t m = chains.size();
    if (m < 2) throw DiagnosticError("gelman_rubin requires at least 2 chains");
    const Eigen::Index n = chains.front().size();
    if (n < 10) throw DiagnosticError("gelman_rubin: chains shorter than 10 draws");
    for (const auto& c : chains) {
        if (c.size() != n) throw DiagnosticError("gelman_rubin: chains of unequal length");
    }

    double grand = 0.0;
    std::vector<double> means(m);
    std::vector<double> vars(m);
    for (std::size_t j = 0; j < m; ++j) {
        means[j] = chains[j].mean();
        vars[j] = (chains[j].array() - means[j]).square().sum() / static_cast<double>(n - 1);
        grand += means[j];
    }
    grand /= static_cast<double>(m);

    double between = 0.0;  // B/n
    for (std::size_t j = 0; j < m; ++j) {
        between += (means[j] - grand) * (means[j] - grand);
    }
    between /= static_cast<double>(m - 1);

    double within = 0.0;
    for (std::size_t j = 0; j < m; ++j) within += vars[j];
    within /= static_cast<double>(m);

    if (!(within > 0.0)) {
        if (between > 0.0) return std::numeric_limits<double>::infinity();
        throw DiagnosticError("gelman_rubin: zero within-chain variance");
    }
    const double var_plus = (static_cast<double>(n - 1) / static_cast<double>(n)) * within + between;
    return std::sqrt(var_plus / within);
}

}  // namespace indicate
