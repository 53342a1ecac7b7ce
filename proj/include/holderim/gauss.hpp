#pragma once

// Standard normal CDF, quantile, and critical values. All Gaussian tail
// arithmetic in the library goes through this header.

#include <cmath>
#include <stdexcept>

namespace holderim::gauss {

inline constexpr double sqrt2 = 1.41421356237309504880;

/// Standard normal CDF. Absolute error well below 1e-10 for |x| <= 8.
inline double phi(double x) { return 0.5 * std::erfc(-x / sqrt2); }

/// Standard normal density.
inline double normal_pdf(double x) {
    constexpr double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

/// Standard normal quantile. Acklam's rational approximation refined by
/// Newton steps on phi, so that |phi(phi_inv(p)) - p| <= 1e-10.
inline double phi_inv(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("phi_inv: p must lie in (0,1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};

    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Newton refinement; two steps take the initial ~1e-9 error to roundoff.
    for (int it = 0; it < 2; ++it) {
        double e = phi(x) - p;
        double dens = normal_pdf(x);
        if (dens > 0.0) x -= e / dens;
    }
    return x;
}

/// z_{1-alpha/2} together with the level that produced it.
struct CriticalValue {
    double alpha;
    double z;
};

inline CriticalValue critical_value(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("critical_value: alpha must lie in (0,1)");
    return {alpha, phi_inv(1.0 - alpha / 2.0)};
}

} // namespace holderim::gauss
