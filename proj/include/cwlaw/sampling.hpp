#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cwlaw/model.hpp"
#include "cwlaw/special_functions.hpp"

// Random generation from the spin-sum law: an exact inverse-CDF sampler built
// on the weight table, and an independent Glauber (heat-bath) chain whose
// stationary law is the same measure. The two paths share nothing but the
// model parameters, which is what makes their agreement a useful check.

namespace cwlaw {

/// SplitMix64 (Steele, Lea, Vigna). Chosen for trivially reproducible streams
/// across languages: the whole generator is three xor-shift-multiply lines.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n); modulo bias is negligible for n << 2^64.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

/// Inverse-CDF sampler for S_n. The cumulative cache is nondecreasing and its
/// last entry sits within 1e-12 of one; draws are binary searches against it.
class ExactSampler {
public:
    ExactSampler(const LogWeightTable& table, std::uint64_t seed)
        : n_(table.n()), rng_(seed) {
        cdf_.reserve(static_cast<std::size_t>(n_) + 1);
        CompensatedSum acc;
        for (std::int64_t k = 0; k <= n_; ++k) {
            acc.add(table.pmf(k));
            cdf_.push_back(acc.value());
        }
    }

    const std::vector<double>& cdf_cache() const { return cdf_; }

    /// i.i.d. draws of the spin sum S_n.
    std::vector<std::int64_t> sample(std::int64_t count) {
        if (count < 1) throw std::invalid_argument("ExactSampler::sample: count must be >= 1");
        std::vector<std::int64_t> draws;
        draws.reserve(static_cast<std::size_t>(count));
        for (std::int64_t i = 0; i < count; ++i) {
            const double u = rng_.next_double();
            const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
            const std::int64_t k = it == cdf_.end() ? n_ : (it - cdf_.begin());
            draws.push_back(2 * k - n_);
        }
        return draws;
    }

private:
    std::int64_t n_;
    SplitMix64 rng_;
    std::vector<double> cdf_;
};

/// Heat-bath probability of setting one spin to +1 given the sum of the
/// others: 1 / (1 + exp(-2 beta (s_rest/n + h))). This is the conditional law
/// of a single spin under the Gibbs measure, so detailed balance is exact.
inline double heat_bath_up_probability(const ModelParams& params, std::int64_t s_rest) {
    const double field = static_cast<double>(s_rest) / static_cast<double>(params.n) + params.h;
    return 1.0 / (1.0 + std::exp(-2.0 * params.beta * field));
}

/// Single-site Glauber dynamics with uniformly random site selection (kept
/// random rather than sequential so each step satisfies detailed balance).
class GlauberChain {
public:
    GlauberChain(const ModelParams& params, std::uint64_t seed)
        : params_(params), rng_(seed), spins_(static_cast<std::size_t>(params.n)) {
        if (params.n < 1) throw std::invalid_argument("GlauberChain: n must be >= 1");
        for (auto& s : spins_) s = (rng_.next() >> 63) ? 1 : -1;
        magnetization_ = 0;
        for (int s : spins_) magnetization_ += s;
    }

    /// n single-site heat-bath updates at uniformly random sites.
    void sweep() {
        const std::int64_t n = params_.n;
        for (std::int64_t step = 0; step < n; ++step) {
            const auto site = static_cast<std::size_t>(rng_.next_below(static_cast<std::uint64_t>(n)));
            const double u = rng_.next_double();
            const std::int64_t s_rest = magnetization_ - spins_[site];
            const int updated = u < heat_bath_up_probability(params_, s_rest) ? 1 : -1;
            magnetization_ += updated - spins_[site];
            spins_[site] = updated;
        }
    }

    /// Post-burn-in empirical pmf of S_n, recorded once per sweep. Indexed by
    /// k = (S+n)/2, matching the weight-table layout.
    std::vector<double> run(std::int64_t sweeps, std::int64_t burn_in) {
        if (sweeps < 1) throw std::invalid_argument("GlauberChain::run: sweeps must be >= 1");
        if (burn_in < 0) throw std::invalid_argument("GlauberChain::run: burn_in must be >= 0");
        std::vector<std::int64_t> counts(static_cast<std::size_t>(params_.n) + 1, 0);
        for (std::int64_t i = 0; i < burn_in; ++i) sweep();
        for (std::int64_t i = 0; i < sweeps; ++i) {
            sweep();
            counts[static_cast<std::size_t>((magnetization_ + params_.n) / 2)] += 1;
        }
        std::vector<double> pmf(counts.size());
        for (std::size_t k = 0; k < counts.size(); ++k) {
            pmf[k] = static_cast<double>(counts[k]) / static_cast<double>(sweeps);
        }
        return pmf;
    }

    std::int64_t magnetization() const { return magnetization_; }

    /// Recompute S from the configuration; equals the tracked running sum.
    std::int64_t recompute_magnetization() const {
        std::int64_t s = 0;
        for (int v : spins_) s += v;
        return s;
    }

    std::span<const int> spins() const { return spins_; }

private:
    ModelParams params_;
    SplitMix64 rng_;
    std::vector<int> spins_;
    std::int64_t magnetization_ = 0;
};

/// Total-variation distance between two pmfs on the same support grid.
inline double tv_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("tv_distance: size mismatch");
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc.add(std::abs(a[i] - b[i]));
    return 0.5 * acc.value();
}

}  // namespace cwlaw
