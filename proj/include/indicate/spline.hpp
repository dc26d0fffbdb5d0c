#pragma once

// Natural cubic smoothing spline (Reinsch form): minimizes the residual
// sum of squares plus lambda times the integrated squared second
// derivative, with knots at the data abscissae. lambda = 0 interpolates.

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace indicate {

class SmoothingSpline {
public:
    static SmoothingSpline fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double lambda);

    double operator()(double t) const;

    const Eigen::VectorXd& knots() const { return x_; }
    const Eigen::VectorXd& fitted() const { return g_; }

private:
    Eigen::VectorXd x_, g_, gamma_;  // gamma = second derivatives at knots (ends zero)
};

struct CurvePoint {
    int day = 0;
    double value = 0.0;
};

// Fits the spline to (K_j, tau_j) points and samples it on the integer-day
// grid spanning the knots.
std::vector<CurvePoint> smooth_curve(const std::vector<std::pair<int, double>>& points, double lambda);

}  // namespace indicate
