#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cwlaw/model.hpp"
#include "cwlaw/special_functions.hpp"

// Limiting objects of the critical law: the quartic density p1, its
// correction p2, the remainder envelope r, the normalised CDF F, the
// second-order correction G, and the finite-n decomposition sums the exact
// tail factors through.

namespace cwlaw {

/// Evaluators around exp(-t^4/12). Full-line monomial moments are cached at
/// construction (G is evaluated on dense grids); everything else is closed
/// form per call. Values with |x| >= 40 saturate: exp(-40^4/12) is far below
/// the double-precision underflow threshold.
class LimitLaw {
public:
    static constexpr double kSaturationX = 40.0;

    LimitLaw() {
        for (int k = 0; k <= kMaxPower; k += 2) {
            full_[static_cast<std::size_t>(k / 2)] = 2.0 * quartic_tail_integral(k, 0.0);
        }
    }

    /// Normaliser of F: int of p1 over the line.
    double c1() const { return full_moment(0); }
    /// int of p2 over the line.
    double c2() const { return 0.5 * full_moment(2) - full_moment(6) / 30.0; }

    double full_moment(int k) const { return full_[checked_index(k)]; }

    /// int_x^inf t^k exp(-t^4/12) dt; x = -inf gives the cached full moment.
    double monomial_tail(int k, double x) const {
        checked_index(k);
        if (x == -std::numeric_limits<double>::infinity()) return full_moment(k);
        if (x <= -kSaturationX) return full_moment(k);
        if (x >= kSaturationX) return 0.0;
        if (x >= 0.0) return quartic_tail_integral(k, x);
        return full_moment(k) - quartic_tail_integral(k, -x);
    }

    double p1(double t) const { return std::exp(-t * t * t * t / 12.0); }
    double p2(double t) const {
        const double t2 = t * t;
        return (0.5 * t2 - t2 * t2 * t2 / 30.0) * p1(t);
    }
    /// r(t) = (1 + t^4 + t^8 + t^12 + t^14/sqrt(n)) exp(-t^4/12); the inner
    /// 1/sqrt(n) makes this a two-argument family.
    double remainder_r(double t, std::int64_t n) const {
        if (n < 1) throw std::invalid_argument("remainder_r: n must be >= 1");
        const double t4 = t * t * t * t;
        const double t8 = t4 * t4;
        const double poly = 1.0 + t4 + t8 + t4 * t8 + t4 * t8 * t * t / std::sqrt(static_cast<double>(n));
        return poly * p1(t);
    }

    double p1_prime(double t) const { return -(t * t * t / 3.0) * p1(t); }
    double p2_prime(double t) const {
        const double t2 = t * t;
        const double t4 = t2 * t2;
        return (t - (11.0 / 30.0) * t4 * t + t4 * t4 * t / 90.0) * p1(t);
    }
    double r_prime(double t, std::int64_t n) const {
        if (n < 1) throw std::invalid_argument("r_prime: n must be >= 1");
        const double rs = 1.0 / std::sqrt(static_cast<double>(n));
        const double t3 = t * t * t;
        const double t4 = t3 * t;
        const double t8 = t4 * t4;
        const double poly = 1.0 + t4 + t8 + t4 * t8 + t4 * t8 * t * t * rs;
        const double dpoly = 4.0 * t3 + 8.0 * t3 * t4 + 12.0 * t3 * t8 + 14.0 * t3 * t8 * t * t * rs;
        return (dpoly - t3 / 3.0 * poly) * p1(t);
    }

    /// P^_1(x) = int_x^inf p1.
    double P1_hat(double x) const { return monomial_tail(0, x); }
    /// P^_2(x) = int_x^inf p2, assembled from monomial tails.
    double P2_hat(double x) const { return 0.5 * monomial_tail(2, x) - monomial_tail(6, x) / 30.0; }
    /// R^(x) = int_x^inf r(t) dt for the given n.
    double R_hat(double x, std::int64_t n) const {
        if (n < 1) throw std::invalid_argument("R_hat: n must be >= 1");
        return monomial_tail(0, x) + monomial_tail(4, x) + monomial_tail(8, x) +
               monomial_tail(12, x) + monomial_tail(14, x) / std::sqrt(static_cast<double>(n));
    }

    /// F(x) = 1 - P^_1(x)/c1, the limiting CDF of S_n/n^{3/4}.
    double cdf_F(double x) const {
        if (x <= -kSaturationX) return 0.0;
        if (x >= kSaturationX) return 1.0;
        return 1.0 - P1_hat(x) / c1();
    }

    /// G(x) = P^_2(x)/P^_1(x) - c2/c1. Past x ~ 9.7 the tails underflow to
    /// zero and the ratio degrades to NaN; callers exclude such points.
    double correction_G(double x) const {
        if (x <= -kSaturationX) return 0.0;
        return P2_hat(x) / P1_hat(x) - c2() / c1();
    }

    /// (1 - F(x)) (1 + G(x)/sqrt(n)), the second-order tail prediction.
    double corrected_tail(std::int64_t n, double x) const {
        if (n < 1) throw std::invalid_argument("corrected_tail: n must be >= 1");
        const double tail = 1.0 - cdf_F(x);
        if (tail == 0.0) return 0.0;
        return tail * (1.0 + correction_G(x) / std::sqrt(static_cast<double>(n)));
    }

    /// (x^12 + n^{1/3})/n, the unit-constant error envelope, defined on the
    /// range 0 <= x <= n^{1/12}. Out-of-range x throws unless explicitly
    /// overridden for exploration.
    double error_envelope(std::int64_t n, double x, bool allow_out_of_range = false) const {
        if (n < 1) throw std::invalid_argument("error_envelope: n must be >= 1");
        const double nd = static_cast<double>(n);
        const double x_max = std::pow(nd, 1.0 / 12.0);
        if (!allow_out_of_range && !(x >= 0.0 && x <= x_max * (1.0 + 1e-12))) {
            throw std::domain_error("error_envelope: x outside [0, n^{1/12}]");
        }
        const double x4 = x * x * x * x;
        return (x4 * x4 * x4 + std::cbrt(nd)) / nd;
    }

    /// (F(x)-1) G(x), the pointwise limit of sqrt(n) (F_n(x) - F(x)).
    double second_order_limit(double x) const {
        if (std::abs(x) >= kSaturationX) return 0.0;
        return (cdf_F(x) - 1.0) * correction_G(x);
    }

private:
    static constexpr int kMaxPower = 14;

    static std::size_t checked_index(int k) {
        if (k < 0 || k > kMaxPower || k % 2 != 0) {
            throw std::invalid_argument("LimitLaw: monomial power must be even, 0..14");
        }
        return static_cast<std::size_t>(k / 2);
    }

    std::array<double, kMaxPower / 2 + 1> full_{};
};

/// The four bulk/tail sums of the normalised weights y_{k,n} = x_{k,n}/y_n:
///   A   over |k - n/2| >= n/4        (both far wings)
///   A^  over  k - n/2  >= n/4        (right wing)
///   B   over |k - n/2| <  n/4        (bulk)
///   B_x over  n/4 > k - n/2 > n^{3/4} x / 2
/// so that the exact critical tail equals (A^ + B_x)/(A + B) whenever the
/// cut n^{3/4} x/2 lies below n/4.
struct DecompositionSums {
    double A = 0.0;
    double A_hat = 0.0;
    double B = 0.0;
    double B_x = 0.0;
    double log_y_n = 0.0;

    double tail_ratio() const { return (A_hat + B_x) / (A + B); }
};

/// Compute the decomposition from a critical table. Wing/bulk boundaries are
/// resolved in integer k-space; the x cut uses the same threshold index as
/// exact_tail_critical so the ratio identity is exact, not approximate.
inline DecompositionSums decompose(const LogWeightTable& table, double x) {
    if (!table.is_critical()) {
        throw std::domain_error("decompose: table must be built at beta = 1, h = 0");
    }
    const std::int64_t n = table.n();
    const double nd = static_cast<double>(n);
    DecompositionSums sums;
    sums.log_y_n = 0.5 * std::log(2.0 / (std::numbers::pi * nd)) + nd * std::numbers::ln2 + 0.5;

    const std::int64_t k_min = detail::critical_threshold_index(n, x);
    CompensatedSum a, a_hat, b, b_x;
    for (std::int64_t k = 0; k <= n; ++k) {
        const double y = std::exp(table.log_weights[static_cast<std::size_t>(k)] - sums.log_y_n);
        const std::int64_t two_ell = 2 * (2 * k - n);  // = 4(k - n/2)
        if (std::abs(two_ell) >= n) {
            a.add(y);
            if (two_ell >= n) a_hat.add(y);
        } else {
            b.add(y);
            if (k >= k_min) b_x.add(y);
        }
    }
    sums.A = a.value();
    sums.A_hat = a_hat.value();
    sums.B = b.value();
    sums.B_x = b_x.value();
    return sums;
}

}  // namespace cwlaw
