#include "indicate/spline.hpp"

#include <cmath>

#include "indicate/errors.hpp"

namespace indicate {

SmoothingSpline SmoothingSpline::fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double lambda) {
    const Eigen::Index n = x.size();
    if (n < 3) throw ValidationError("smoothing spline needs at least 3 points");
    if (y.size() != n) throw ValidationError("smoothing spline: x/y length mismatch");
    if (!(lambda >= 0.0)) throw ValidationError("smoothing spline: lambda must be >= 0");
    for (Eigen::Index i = 1; i < n; ++i) {
        if (!(x(i) > x(i - 1))) throw ValidationError("smoothing spline: abscissae must be strictly increasing");
    }

    const Eigen::VectorXd h = x.tail(n - 1) - x.head(n - 1);

    // Q maps knot values to scaled second differences; R is the Gram matrix
    // of the second-derivative basis (Green & Silverman band matrices).
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n - 2);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n - 2, n - 2);
    for (Eigen::Index j = 0; j < n - 2; ++j) {
        Q(j, j) = 1.0 / h(j);
        Q(j + 1, j) = -1.0 / h(j) - 1.0 / h(j + 1);
        Q(j + 2, j) = 1.0 / h(j + 1);
        R(j, j) = (h(j) + h(j + 1)) / 3.0;
        if (j + 1 < n - 2) {
            R(j, j + 1) = h(j + 1) / 6.0;
            R(j + 1, j) = h(j + 1) / 6.0;
        }
    }

    const Eigen::MatrixXd lhs = R + lambda * (Q.transpose() * Q);
    Eigen::LDLT<Eigen::MatrixXd> solver(lhs);
    if (solver.info() != Eigen::Success) throw NumericError("smoothing spline: singular system");
    const Eigen::VectorXd gamma_int = solver.solve(Q.transpose() * y);

    SmoothingSpline spline;
    spline.x_ = x;
    spline.g_ = y - lambda * (Q * gamma_int);
    spline.gamma_ = Eigen::VectorXd::Zero(n);
    spline.gamma_.segment(1, n - 2) = gamma_int;
    return spline;
}

double SmoothingSpline::operator()(double t) const {
    const Eigen::Index n = x_.size();
    if (t <= x_(0)) {
        const double h = x_(1) - x_(0);
        const double slope = (g_(1) - g_(0)) / h - h / 6.0 * (gamma_(1) + 2.0 * gamma_(0));
        return g_(0) + slope * (t - x_(0));
    }
    if (t >= x_(n - 1)) {
        const double h = x_(n - 1) - x_(n - 2);
        const double slope = (g_(n - 1) - g_(n - 2)) / h + h / 6.0 * (2.0 * gamma_(n - 1) + gamma_(n - 2));
        return g_(n - 1) + slope * (t - x_(n - 1));
    }

    Eigen::Index i = 0;
    while (i + 2 < n && x_(i + 1) < t) ++i;
    const double h = x_(i + 1) - x_(i);
    const double a = t - x_(i);
    const double b = x_(i + 1) - t;
    double value = (b * g_(i) + a * g_(i + 1)) / h;
    value -= a * b / 6.0 * ((1.0 + a / h) * gamma_(i + 1) + (1.0 + b / h) * gamma_(i));
    return value;
}

std::vector<CurvePoint> smooth_curve(const std::vector<std::pair<int, double>>& points, double lambda) {
    Eigen::VectorXd x(points.size()), y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        x(static_cast<Eigen::Index>(i)) = points[i].first;
        y(static_cast<Eigen::Index>(i)) = points[i].second;
    }
    const SmoothingSpline spline = SmoothingSpline::fit(x, y, lambda);

    std::vector<CurvePoint> out;
    for (int day = points.front().first; day <= points.back().first; ++day) {
        out.push_back({day, spline(static_cast<double>(day))});
    }
    return out;
}

}  // namespace indicate
