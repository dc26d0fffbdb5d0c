#pragma once

// Scalar distribution functions used throughout the model code. The probit
// link saturates numerically outside |z| ~ 37, so callers that need log
// tail probabilities must use log_norm_sf / log_norm_cdf instead of
// composing log(1 - norm_cdf(z)).

#include <cmath>
#include <limits>

namespace indicate {

// Arguments to the probit link are clamped to this magnitude so that both
// tails keep a representable, nonzero probability.
inline constexpr double kProbitClamp = 37.0;

inline double norm_pdf(double z) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

inline double norm_cdf(double z) {
    return 0.5 * std::erfc(-z * M_SQRT1_2);
}

// Upper tail P(Z > z), accurate for large positive z where 1 - norm_cdf(z)
// would round to zero.
inline double norm_sf(double z) {
    return 0.5 * std::erfc(z * M_SQRT1_2);
}

inline double log_norm_cdf(double z) {
    if (z > -1.0) return std::log1p(-norm_sf(z));
    return std::log(norm_cdf(z));
}

inline double log_norm_sf(double z) {
    return log_norm_cdf(-z);
}

// log Phi(z) and log(1 - Phi(z)) together from a single erfc evaluation,
// computed in whichever tail keeps the small probability exact.
inline void probit_logs(double z, double& log_p, double& log_1mp) {
    if (z >= 0.0) {
        const double sf = norm_sf(z);
        log_p = std::log1p(-sf);
        log_1mp = std::log(sf);
    } else {
        const double p = norm_cdf(z);
        log_p = std::log(p);
        log_1mp = std::log1p(-p);
    }
}

inline double invlogit(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log(invlogit(x)) without intermediate saturation.
inline double log_invlogit(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

// log(1 - invlogit(x)) = log(invlogit(-x)).
inline double log1m_invlogit(double x) {
    return log_invlogit(-x);
}

// Inverse standard normal CDF via Acklam's rational approximation
// (relative error ~1e-9), sufficient for random variate generation.
inline double norm_quantile_raw(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return std::numeric_limits<double>::quiet_NaN();
    }

    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};

    const double p_low = 0.02425;
    double z;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    return z;
}

// One Newton polish on top of the rational approximation, close to full
// double precision over the representable range of p.
inline double norm_quantile(double p) {
    double z = norm_quantile_raw(p);
    const double dens = norm_pdf(z);
    if (dens > 0.0) {
        // Phi(z) - p, evaluated in whichever tail keeps the subtraction exact.
        const double err = (z < 0.0) ? norm_cdf(z) - p : (1.0 - p) - norm_sf(z);
        const double step = err / dens;
        if (std::isfinite(step)) z -= step;
    }
    return z;
}

}  // namespace indicate
