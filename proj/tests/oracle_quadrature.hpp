#pragma once

// Test-only oracles. These deliberately avoid the library's own kernels: the
// incomplete-gamma route is cross-checked against direct adaptive quadrature
// of the defining integrals (Boost tanh-sinh / Gauss-Kronrod).

#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &error);
}

/// int_x^inf t^k exp(-t^4/12) dt by quadrature; the integrand underflows to
/// zero well before |t| = 50, so the window [-50, 50] is the full line.
inline double quartic_tail(int k, double x) {
    auto f = [k](double t) { return std::pow(t, k) * std::exp(-t * t * t * t / 12.0); };
    const double lo = std::max(x, -50.0);
    if (lo >= 50.0) return 0.0;
    if (lo < 0.0) return integrate(f, lo, 0.0) + integrate(f, 0.0, 50.0);
    return integrate(f, lo, 50.0);
}

/// Gamma(s, z) by tanh-sinh quadrature (handles the t^{s-1} endpoint
/// singularity when z = 0 and s < 1). Truncated where e^{-t} underflows
/// relative to the mass near z.
inline double upper_gamma(double s, double z) {
    boost::math::quadrature::tanh_sinh<double> quad;
    auto f = [s](double t) { return std::pow(t, s - 1.0) * std::exp(-t); };
    return quad.integrate(f, z, z + 250.0, 1e-14);
}

/// Phi(x) by quadrature of the normal density from far in the left tail.
inline double normal_cdf(double x) {
    auto f = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    return integrate(f, -42.0, x);
}

}  // namespace oracle
