#pragma once

#include <Eigen/Dense>
#include <vector>

namespace indicate {

// Spectral density at frequency zero via a Bartlett lag window, divided by
// the segment length; the variance estimate used by the Geweke statistic.
double spectral_variance(const Eigen::VectorXd& segment);

// Geweke convergence score comparing the first frac_a of a chain against
// the last frac_b. Throws DiagnosticError when a segment has no variance.
double geweke_z(const Eigen::VectorXd& chain, double frac_a = 0.1, double frac_b = 0.5);

// Potential scale reduction factor over >= 2 equal-length chains.
double gelman_rubin(const std::vector<Eigen::VectorXd>& chains);

}  // namespace indicate
