#pragma once

#include <cmath>
#include <functional>

namespace resolute {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// sinc(x) = sin(x)/x with sinc(0) = 1.
inline double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-3) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
    }
    return std::sin(x) / x;
}

/// d/dx sinc(x) = cos(x)/x - sin(x)/x^2, with the removable singularity at 0.
inline double dsinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-3) {
        const double x2 = x * x;
        return x * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0);
    }
    return std::cos(x) / x - std::sin(x) / (x * x);
}

struct QuadratureOptions {
    double rel_tol = 1e-10;      // relative to `scale` (natural magnitude of the integral)
    std::size_t max_intervals = std::size_t{1} << 20;
};

/// Adaptive Simpson quadrature of f over [a, b].
///
/// `scale` sets the magnitude against which the tolerance is measured, so
/// integrals that nearly cancel are still resolved to rel_tol * scale in
/// absolute terms. Deterministic; throws on non-finite values or when the
/// interval budget is exhausted.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double scale, const QuadratureOptions& opts = {});

}  // namespace resolute
