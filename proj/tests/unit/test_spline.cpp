#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "indicate/errors.hpp"
#include "indicate/rng.hpp"
#include "indicate/spline.hpp"

using namespace indicate;

namespace {

// Independent route: dense solve of (I + lambda Q R^{-1} Q^T) g = y.
Eigen::VectorXd dense_smoother(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double lambda) {
    const Eigen::Index n = x.size();
    const Eigen::VectorXd h = x.tail(n - 1) - x.head(n - 1);
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n - 2);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n - 2, n - 2);
    for (Eigen::Index j = 0; j < n - 2; ++j) {
        Q(j, j) = 1.0 / h(j);
        Q(j + 1, j) = -1.0 / h(j) - 1.0 / h(j + 1);
        Q(j + 2, j) = 1.0 / h(j + 1);
        R(j, j) = (h(j) + h(j + 1)) / 3.0;
        if (j + 1 < n - 2) R(j, j + 1) = R(j + 1, j) = h(j + 1) / 6.0;
    }
    const Eigen::MatrixXd Kmat = Q * R.inverse() * Q.transpose();
    return (Eigen::MatrixXd::Identity(n, n) + lambda * Kmat).ldlt().solve(y);
}

}  // namespace

TEST_CASE("lambda zero interpolates the points") {
    Eigen::VectorXd x(5), y(5);
    x << 14, 30, 60, 90, 120;
    y << -0.104, -0.096, -0.082, -0.108, -0.101;
    const auto spline = SmoothingSpline::fit(x, y, 0.0);
    for (int i = 0; i < 5; ++i) CHECK(spline(x(i)) == doctest::Approx(y(i)).epsilon(1e-12));
}

TEST_CASE("straight-line data is reproduced for any lambda") {
    Eigen::VectorXd x(6), y(6);
    x << 1, 3, 4, 7, 11, 16;
    for (int i = 0; i < 6; ++i) y(i) = 2.0 - 0.5 * x(i);
    for (const double lambda : {0.0, 1.0, 50.0, 1e6}) {
        const auto spline = SmoothingSpline::fit(x, y, lambda);
        for (double t = 0.0; t <= 18.0; t += 0.5) {
            CHECK(spline(t) == doctest::Approx(2.0 - 0.5 * t).epsilon(1e-9));
        }
    }
}

TEST_CASE("fitted values match the dense smoothing system") {
    Rng rng(21);
    Eigen::VectorXd x(9), y(9);
    double pos = 0.0;
    for (int i = 0; i < 9; ++i) {
        pos += 1.0 + rng.uniform();
        x(i) = pos;
        y(i) = std::sin(0.8 * pos) + 0.2 * rng.normal();
    }
    for (const double lambda : {0.3, 2.0, 25.0}) {
        const auto spline = SmoothingSpline::fit(x, y, lambda);
        const Eigen::VectorXd oracle = dense_smoother(x, y, lambda);
        for (int i = 0; i < 9; ++i) {
            CHECK(std::abs(spline.fitted()(i) - oracle(i)) < 1e-8);
            CHECK(spline(x(i)) == doctest::Approx(spline.fitted()(i)).epsilon(1e-10));
        }
    }
}

TEST_CASE("large lambda approaches the least-squares line") {
    Eigen::VectorXd x(8), y(8);
    x << 14, 30, 60, 90, 120, 180, 270, 365;
    y << -0.104, -0.096, -0.082, -0.108, -0.101, -0.110, -0.105, -0.120;
    const auto spline = SmoothingSpline::fit(x, y, 1e12);

    // Ordinary least squares on (x, y).
    Eigen::MatrixXd X(8, 2);
    X.col(0).setOnes();
    X.col(1) = x;
    const Eigen::VectorXd coef = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    for (int i = 0; i < 8; ++i) {
        CHECK(spline(x(i)) == doctest::Approx(coef(0) + coef(1) * x(i)).epsilon(1e-4));
    }
}

TEST_CASE("input validation") {
    Eigen::VectorXd x(3), y(3);
    x << 1, 2, 2;
    y << 0, 0, 0;
    CHECK_THROWS_AS(SmoothingSpline::fit(x, y, 1.0), ValidationError);
    Eigen::VectorXd x2(2), y2(2);
    x2 << 1, 2;
    y2 << 0, 0;
    CHECK_THROWS_AS(SmoothingSpline::fit(x2, y2, 1.0), ValidationError);
}

TEST_CASE("smooth_curve samples the integer day grid") {
    const std::vector<std::pair<int, double>> pts = {{14, -0.104}, {30, -0.096}, {60, -0.082},
                                                     {90, -0.108}};
    const auto curve = smooth_curve(pts, 0.0);
    REQUIRE(curve.size() == 90 - 14 + 1);
    CHECK(curve.front().day == 14);
    CHECK(curve.back().day == 90);
    CHECK(curve.front().value == doctest::Approx(-0.104).epsilon(1e-10));
    CHECK(curve.back().value == doctest::Approx(-0.108).epsilon(1e-10));
}
