#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

// Scalar numerical kernels: log-factorial, Stirling brackets, upper incomplete
// gamma, tail integrals of t^k exp(-t^4/12), and the standard normal CDF.
// Everything here is a pure function of its arguments; no global state.

namespace cwlaw {

/// Thrown when an iterative kernel fails to converge within its cap.
/// A silent wrong value is never returned instead.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Neumaier-compensated accumulator. Unlike plain Kahan it stays exact-ish
/// when a term exceeds the running sum (e.g. {1e30, 1, -1e30}).
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// ln(n!) via the log-gamma identity ln Gamma(n+1). Relative error is at the
/// few-ulp level of std::lgamma, well inside 1e-14.
inline double log_factorial(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("log_factorial: n must be >= 0");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

/// Two-sided Stirling bracket of ln(n!):
///   ln sqrt(2 pi n) + n ln n - n + 1/(12n+1)  <=  ln(n!)  <=  same + 1/(12n).
struct StirlingBounds {
    double lower;
    double upper;
};

inline StirlingBounds stirling_bounds(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("stirling_bounds: n must be >= 1");
    const double nd = static_cast<double>(n);
    const double base = 0.5 * std::log(2.0 * M_PI * nd) + nd * std::log(nd) - nd;
    return {base + 1.0 / (12.0 * nd + 1.0), base + 1.0 / (12.0 * nd)};
}

namespace detail {

inline constexpr int kGammaMaxIter = 500;
inline constexpr double kGammaTol = 1e-15;

// Lower series: gamma(s,z) = z^s e^{-z} sum_{m>=0} z^m / (s (s+1) ... (s+m)).
// Converges fast for z < s+1.
inline double lower_gamma_series(double s, double z) {
    double term = 1.0 / s;
    double sum = term;
    for (int i = 1; i <= kGammaMaxIter; ++i) {
        term *= z / (s + i);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kGammaTol) {
            return sum * std::exp(s * std::log(z) - z);
        }
    }
    throw NumericalError("upper_incomplete_gamma: series did not converge (s=" +
                         std::to_string(s) + ", z=" + std::to_string(z) + ")");
}

// Continued fraction (modified Lentz) for Gamma(s,z), z >= s+1:
//   Gamma(s,z) = e^{-z} z^s / (z+1-s - 1(1-s)/(z+3-s - 2(2-s)/(...)))
inline double upper_gamma_cf(double s, double z) {
    const double tiny = 1e-300;
    double b = z + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kGammaMaxIter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kGammaTol) {
            return std::exp(s * std::log(z) - z) * h;
        }
    }
    throw NumericalError("upper_incomplete_gamma: continued fraction did not converge (s=" +
                         std::to_string(s) + ", z=" + std::to_string(z) + ")");
}

}  // namespace detail

/// Upper incomplete gamma Gamma(s, z) = int_z^inf t^{s-1} e^{-t} dt, s > 0,
/// z >= 0, non-normalised. Series branch below z = s+1, continued fraction
/// above; both capped at 500 iterations with per-step tolerance 1e-15.
inline double upper_incomplete_gamma(double s, double z) {
    if (!(s > 0.0)) throw std::invalid_argument("upper_incomplete_gamma: s must be > 0");
    if (!(z >= 0.0)) throw std::invalid_argument("upper_incomplete_gamma: z must be >= 0");
    if (z == 0.0) return std::tgamma(s);
    if (z < s + 1.0) {
        return std::tgamma(s) - detail::lower_gamma_series(s, z);
    }
    return detail::upper_gamma_cf(s, z);
}

/// int_x^inf t^k e^{-t^4/12} dt for even k >= 0; x may be -infinity for the
/// full-line moment. With u = t^4/12 the positive-x tail reduces to
/// (12^{(k+1)/4}/4) Gamma((k+1)/4, x^4/12); negative x uses evenness.
inline double quartic_tail_integral(int power, double x) {
    if (power < 0 || power % 2 != 0) {
        throw std::invalid_argument("quartic_tail_integral: power must be even and >= 0");
    }
    const double s = (power + 1) / 4.0;
    const double scale = std::pow(12.0, s) / 4.0;
    const double full = 2.0 * scale * std::tgamma(s);
    if (x == -std::numeric_limits<double>::infinity()) return full;
    if (x >= 0.0) return scale * upper_incomplete_gamma(s, x * x * x * x / 12.0);
    const double nx = -x;
    return full - scale * upper_incomplete_gamma(s, nx * nx * nx * nx / 12.0);
}

/// Standard normal CDF via erfc; absolute error at the 1e-16 level.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

/// 1 - Phi(x), computed without cancellation for large x.
inline double normal_tail(double x) {
    return 0.5 * std::erfc(x * M_SQRT1_2);
}

}  // namespace cwlaw
