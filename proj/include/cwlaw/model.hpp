#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cwlaw/special_functions.hpp"

// The exact finite-n Curie-Weiss magnetization law. Spin-sum weights are kept
// in log space throughout; probabilities only materialise after a max-shifted
// log-sum-exp, so n = 10^6 tables stay finite.

namespace cwlaw {

enum class Regime { unique, pair, critical };

/// One finite system: n spins, inverse temperature beta, external field h.
struct ModelParams {
    std::int64_t n = 1;
    double beta = 1.0;
    double h = 0.0;
};

/// Regime is a pure function of (beta, h): beta < 1 (any h) or h != 0 gives a
/// unique magnetization; beta > 1, h = 0 a symmetric pair; beta = 1, h = 0 is
/// critical.
inline Regime classify_regime(double beta, double h) {
    if (!(beta > 0.0)) throw std::invalid_argument("classify_regime: beta must be > 0");
    if (beta < 1.0 || h != 0.0) return Regime::unique;
    if (beta == 1.0) return Regime::critical;
    return Regime::pair;
}

/// Roots of m = tanh(beta (m + h)) with their regime tag. In the pair regime
/// m1 = -m2 < 0 < m2; in the unique regime m0 has the sign of h; the critical
/// root is exactly zero.
struct MagnetizationRoots {
    Regime regime = Regime::critical;
    double m0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double residual = 0.0;  // max |m - tanh(beta(m+h))| over stored roots
};

namespace detail {

inline double fixed_point_gap(double beta, double h, double m) {
    return std::tanh(beta * (m + h)) - m;
}

// Bisection on a sign bracket [lo, hi] with gap(lo) > 0 > gap(hi); converges
// unconditionally, refined to the last representable interval.
inline double bisect_root(double beta, double h, double lo, double hi) {
    for (int i = 0; i < 200 && hi - lo > 1e-17 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (fixed_point_gap(beta, h, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Solve the fixed-point equation for any (beta, h).
inline MagnetizationRoots solve_fixed_point(double beta, double h) {
    MagnetizationRoots roots;
    roots.regime = classify_regime(beta, h);
    switch (roots.regime) {
        case Regime::critical:
            return roots;  // the unique root is exactly 0
        case Regime::unique: {
            if (h == 0.0) {
                roots.m0 = 0.0;  // beta < 1: tanh(beta m) - m has a single zero
            } else if (h > 0.0) {
                roots.m0 = detail::bisect_root(beta, h, 0.0, 1.0);
            } else {
                roots.m0 = -detail::bisect_root(beta, -h, 0.0, 1.0);
            }
            roots.residual = std::abs(detail::fixed_point_gap(beta, h, roots.m0));
            return roots;
        }
        case Regime::pair: {
            // gap > 0 just right of 0 since tanh(beta m) ~ beta m with beta > 1
            double lo = 1e-8;
            while (detail::fixed_point_gap(beta, 0.0, lo) <= 0.0 && lo > 1e-300) lo *= 1e-4;
            roots.m2 = detail::bisect_root(beta, 0.0, lo, 1.0);
            roots.m1 = -roots.m2;
            roots.residual = std::abs(detail::fixed_point_gap(beta, 0.0, roots.m2));
            return roots;
        }
    }
    throw std::logic_error("solve_fixed_point: unreachable");
}

/// Standardization scale v_n = sqrt(n (1-m^2) / (1 - (1-m^2) beta)) for a root
/// m of the fixed-point equation. Requires the denominator to be positive,
/// which fails exactly in the critical case.
inline double standardization_scale(const ModelParams& params, double m) {
    const double one_minus_m2 = 1.0 - m * m;
    const double denom = 1.0 - one_minus_m2 * params.beta;
    if (!(denom > 0.0)) {
        throw std::domain_error("standardization_scale: 1 - (1-m^2) beta must be positive");
    }
    return std::sqrt(static_cast<double>(params.n) * one_minus_m2 / denom);
}

/// Binary entropy I(t) = (t-1) log(1-t) - t log t on [0,1], with I(0)=I(1)=0.
inline double entropy(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("entropy: t must lie in [0,1]");
    if (t == 0.0 || t == 1.0) return 0.0;
    return (t - 1.0) * std::log1p(-t) - t * std::log(t);
}

/// J(t) = I(t) + (2t-1)^2/2, the exponent governing the critical weights.
inline double tilted_entropy(double t) {
    const double u = 2.0 * t - 1.0;
    return entropy(t) + 0.5 * u * u;
}

/// Closed-form derivatives J^(order) for order 1..8, t strictly inside (0,1).
/// Not finite differences; the forms follow from J' = log((1-t)/t) + 4t - 2.
inline double tilted_entropy_derivative(int order, double t) {
    if (!(t > 0.0 && t < 1.0)) {
        throw std::invalid_argument("tilted_entropy_derivative: t must lie in (0,1)");
    }
    const double a = 1.0 / t;
    const double b = 1.0 / (1.0 - t);
    auto ipow = [](double v, int k) {
        double r = 1.0;
        for (int i = 0; i < k; ++i) r *= v;
        return r;
    };
    switch (order) {
        case 1: return std::log((1.0 - t) / t) + 4.0 * t - 2.0;
        case 2: return -(a + b) + 4.0;
        case 3: return ipow(a, 2) - ipow(b, 2);
        case 4: return -2.0 * (ipow(a, 3) + ipow(b, 3));
        case 5: return 6.0 * (ipow(a, 4) - ipow(b, 4));
        case 6: return -24.0 * (ipow(a, 5) + ipow(b, 5));
        case 7: return 120.0 * (ipow(a, 6) - ipow(b, 6));
        case 8: return -720.0 * (ipow(a, 7) + ipow(b, 7));
        default:
            throw std::invalid_argument("tilted_entropy_derivative: order must be 1..8");
    }
}

/// Log-weights of the spin-sum law: entry k holds
///   log C(n,k) + beta (2k-n)^2/(2n) + beta/2 + beta h (2k-n),
/// together with the log partition sum. Immutable after construction.
struct LogWeightTable {
    ModelParams params;
    std::vector<double> log_weights;  // size n+1
    double log_partition = 0.0;

    std::int64_t n() const { return params.n; }
    bool is_critical() const { return params.beta == 1.0 && params.h == 0.0; }

    /// P(S_n = 2k - n).
    double pmf(std::int64_t k) const {
        return std::exp(log_weights[static_cast<std::size_t>(k)] - log_partition);
    }
};

inline constexpr std::int64_t kMaxTableSize = std::int64_t{1} << 28;

inline LogWeightTable build_log_weight_table(const ModelParams& params) {
    if (params.n < 1) throw std::invalid_argument("build_log_weight_table: n must be >= 1");
    if (!(params.beta > 0.0)) throw std::invalid_argument("build_log_weight_table: beta must be > 0");
    if (params.n > kMaxTableSize) {
        throw std::length_error("build_log_weight_table: table of size n+1 exceeds capacity");
    }
    const std::int64_t n = params.n;
    const double nd = static_cast<double>(n);
    const double lfn = log_factorial(n);

    LogWeightTable table;
    table.params = params;
    table.log_weights.resize(static_cast<std::size_t>(n) + 1);
    for (std::int64_t k = 0; k <= n; ++k) {
        const double ell = static_cast<double>(2 * k - n);
        // the two log-factorials are grouped first so that k <-> n-k produces
        // bitwise-identical weights at h = 0
        table.log_weights[static_cast<std::size_t>(k)] =
            lfn - (log_factorial(k) + log_factorial(n - k)) +
            params.beta * ell * ell / (2.0 * nd) + 0.5 * params.beta + params.beta * params.h * ell;
    }
    // log-sum-exp with max shift; all shifted exponentials are <= 1
    const double shift = *std::max_element(table.log_weights.begin(), table.log_weights.end());
    CompensatedSum acc;
    for (double lw : table.log_weights) acc.add(std::exp(lw - shift));
    table.log_partition = shift + std::log(acc.value());
    return table;
}

namespace detail {

// Smallest k with k > (n + n^{3/4} x)/2; may return n+1 (empty tail) or 0.
// Computed in k-space so integer ties land on the strict side exactly.
inline std::int64_t critical_threshold_index(std::int64_t n, double x) {
    const double nd = static_cast<double>(n);
    const double cut = 0.5 * (nd + std::pow(nd, 0.75) * x);
    if (!(cut >= 0.0)) return 0;          // covers x -> -inf
    if (cut >= nd) return n + 1;
    return static_cast<std::int64_t>(std::floor(cut)) + 1;
}

}  // namespace detail

/// mu(W_n > x) for W_n = S_n / n^{3/4} at the critical parameters, summed with
/// strict inequality k > (n + n^{3/4} x)/2. Compensated summation, descending k.
inline double exact_tail_critical(const LogWeightTable& table, double x) {
    if (!table.is_critical()) {
        throw std::domain_error("exact_tail_critical: table must be built at beta = 1, h = 0");
    }
    const std::int64_t n = table.n();
    const std::int64_t k_min = detail::critical_threshold_index(n, x);
    if (k_min > n) return 0.0;
    CompensatedSum acc;
    for (std::int64_t k = n; k >= k_min; --k) acc.add(table.pmf(k));
    return acc.value();
}

/// Suffix-sum cache over a critical table; tail(x) matches exact_tail_critical
/// bit for bit (same summation order) at O(1) per query.
class CriticalTailCache {
public:
    explicit CriticalTailCache(const LogWeightTable& table) : n_(table.n()) {
        if (!table.is_critical()) {
            throw std::domain_error("CriticalTailCache: table must be built at beta = 1, h = 0");
        }
        suffix_.resize(static_cast<std::size_t>(n_) + 2, 0.0);
        CompensatedSum acc;
        for (std::int64_t k = n_; k >= 0; --k) {
            acc.add(table.pmf(k));
            suffix_[static_cast<std::size_t>(k)] = acc.value();
        }
    }

    double tail(double x) const {
        const std::int64_t k_min = detail::critical_threshold_index(n_, x);
        if (k_min > n_) return 0.0;
        return suffix_[static_cast<std::size_t>(k_min)];
    }

    double cdf(double x) const { return 1.0 - tail(x); }

private:
    std::int64_t n_;
    std::vector<double> suffix_;
};

enum class Conditioning { none, negative_spin, positive_spin };

/// Tail of the standardized magnetization. Unconditioned form uses
/// W = (S_n - n m0)/v_n in the unique regime; the pair regime conditions on
/// S_n < 0 (root m1) or S_n > 0 (root m2), both strict, so an S_n = 0 atom
/// belongs to neither half.
inline double exact_tail_standardized(const LogWeightTable& table, const MagnetizationRoots& roots,
                                      double x, Conditioning conditioning) {
    const std::int64_t n = table.n();
    double m = 0.0;
    std::int64_t set_lo = 0;
    std::int64_t set_hi = n;
    switch (conditioning) {
        case Conditioning::none:
            if (roots.regime != Regime::unique) {
                throw std::domain_error("exact_tail_standardized: unconditioned form requires the unique regime");
            }
            m = roots.m0;
            break;
        case Conditioning::negative_spin:
            if (roots.regime != Regime::pair) {
                throw std::domain_error("exact_tail_standardized: conditioning requires the pair regime");
            }
            m = roots.m1;
            set_hi = (n - 1) / 2;  // 2k - n < 0
            break;
        case Conditioning::positive_spin:
            if (roots.regime != Regime::pair) {
                throw std::domain_error("exact_tail_standardized: conditioning requires the pair regime");
            }
            m = roots.m2;
            set_lo = n / 2 + 1;  // 2k - n > 0
            break;
    }
    if (set_lo > set_hi) {
        throw std::domain_error("exact_tail_standardized: conditioning event is empty");
    }
    const double v = standardization_scale(table.params, m);
    const double threshold = static_cast<double>(n) * m + v * x;  // in S-space
    // strict S > threshold, resolved in k-space
    const double cut = 0.5 * (static_cast<double>(n) + threshold);
    std::int64_t k_min;
    if (!(cut >= 0.0)) {
        k_min = 0;
    } else if (cut >= static_cast<double>(n)) {
        k_min = n + 1;
    } else {
        k_min = static_cast<std::int64_t>(std::floor(cut)) + 1;
    }
    k_min = std::max(k_min, set_lo);

    CompensatedSum numer;
    for (std::int64_t k = set_hi; k >= k_min; --k) numer.add(table.pmf(k));
    CompensatedSum denom;
    for (std::int64_t k = set_hi; k >= set_lo; --k) denom.add(table.pmf(k));
    const double mass = denom.value();
    if (!(mass > 0.0)) {
        throw std::domain_error("exact_tail_standardized: conditioning event has zero mass");
    }
    return numer.value() / mass;
}

inline constexpr std::int64_t kMaxBruteForceSpins = 20;

/// Exact pmf of S_n by enumerating all 2^n configurations and evaluating the
/// Boltzmann exponent (beta/n) sum_{i<j} s_i s_j + beta h sum_i s_i with an
/// explicit pair loop. Deliberately shares no algebra with the weight table;
/// this is the independent oracle the table is tested against.
inline std::map<std::int64_t, double> brute_force_pmf(const ModelParams& params) {
    const std::int64_t n = params.n;
    if (n < 1) throw std::invalid_argument("brute_force_pmf: n must be >= 1");
    if (n > kMaxBruteForceSpins) {
        throw std::length_error("brute_force_pmf: 2^n enumeration capped at n = 20");
    }
    std::vector<double> mass(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> spin(static_cast<std::size_t>(n));
    const double nd = static_cast<double>(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::int64_t i = 0; i < n; ++i) {
            spin[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? 1 : -1;
        }
        std::int64_t pair_sum = 0;
        std::int64_t s = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            s += spin[static_cast<std::size_t>(i)];
            for (std::int64_t j = i + 1; j < n; ++j) {
                pair_sum += spin[static_cast<std::size_t>(i)] * spin[static_cast<std::size_t>(j)];
            }
        }
        const double w = std::exp(params.beta / nd * static_cast<double>(pair_sum) +
                                  params.beta * params.h * static_cast<double>(s));
        mass[static_cast<std::size_t>((s + n) / 2)] += w;
    }
    CompensatedSum total;
    for (double w : mass) total.add(w);
    std::map<std::int64_t, double> pmf;
    for (std::int64_t k = 0; k <= n; ++k) {
        pmf[2 * k - n] = mass[static_cast<std::size_t>(k)] / total.value();
    }
    return pmf;
}

}  // namespace cwlaw
