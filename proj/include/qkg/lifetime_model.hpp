#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qkg/errors.hpp"
#include "qkg/quadrature.hpp"
#include "qkg/rng.hpp"

namespace qkg::lifetime {

// Analytic key-lifetime model: deterministic refreshes at rate
// lambda_R = sqrt(lambda / (2 phi t_h)) over a session of length T_s, key
// expiry times i.i.d. with CDF F_e. The headline quantity is the probability
// that a key outlives the residual time to its next refresh.

enum class ExpiryKind { Exponential, Deterministic, Empirical };

class ExpiryDistribution {
public:
    static ExpiryDistribution exponential(double mean) {
        if (!(mean > 0.0)) throw DomainError("exponential mean must be positive");
        ExpiryDistribution d;
        d.kind_ = ExpiryKind::Exponential;
        d.mean_ = mean;
        return d;
    }

    static ExpiryDistribution deterministic(double value) {
        if (!(value >= 0.0)) throw DomainError("deterministic expiry must be non-negative");
        ExpiryDistribution d;
        d.kind_ = ExpiryKind::Deterministic;
        d.value_ = value;
        return d;
    }

    static ExpiryDistribution empirical(std::vector<double> samples) {
        if (samples.empty()) throw DomainError("empirical sample set must be nonempty");
        for (double s : samples)
            if (!(s >= 0.0)) throw DomainError("empirical samples must be non-negative");
        ExpiryDistribution d;
        d.kind_ = ExpiryKind::Empirical;
        d.samples_ = std::move(samples);
        std::sort(d.samples_.begin(), d.samples_.end());
        return d;
    }

    ExpiryKind kind() const { return kind_; }

    double mean() const {
        switch (kind_) {
            case ExpiryKind::Exponential: return mean_;
            case ExpiryKind::Deterministic: return value_;
            case ExpiryKind::Empirical: {
                double sum = 0.0;
                for (double s : samples_) sum += s;
                return sum / static_cast<double>(samples_.size());
            }
        }
        return 0.0;
    }

    double cdf(double t) const {
        if (t < 0.0) return 0.0;
        switch (kind_) {
            case ExpiryKind::Exponential: return 1.0 - std::exp(-t / mean_);
            case ExpiryKind::Deterministic: return t >= value_ ? 1.0 : 0.0;
            case ExpiryKind::Empirical: {
                auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
                return static_cast<double>(it - samples_.begin()) /
                       static_cast<double>(samples_.size());
            }
        }
        return 0.0;
    }

    double sample(Xoshiro256ss& rng) const {
        switch (kind_) {
            case ExpiryKind::Exponential: return -mean_ * std::log(1.0 - rng.next_double());
            case ExpiryKind::Deterministic: return value_;
            case ExpiryKind::Empirical:
                return samples_[static_cast<std::size_t>(rng.below(samples_.size()))];
        }
        return 0.0;
    }

    // E[exp(-s t_e)], closed form per kind.
    double laplace(double s) const {
        if (s < 0.0) throw DomainError("Laplace argument must be non-negative");
        switch (kind_) {
            case ExpiryKind::Exponential: return 1.0 / (1.0 + s * mean_);
            case ExpiryKind::Deterministic: return std::exp(-s * value_);
            case ExpiryKind::Empirical: {
                double sum = 0.0;
                for (double x : samples_) sum += std::exp(-s * x);
                return sum / static_cast<double>(samples_.size());
            }
        }
        return 0.0;
    }

    // Interior jump points of the CDF inside (lo, hi); quadratures split here.
    std::vector<double> breakpoints(double lo, double hi) const {
        std::vector<double> pts;
        switch (kind_) {
            case ExpiryKind::Exponential: break;
            case ExpiryKind::Deterministic:
                if (value_ > lo && value_ < hi) pts.push_back(value_);
                break;
            case ExpiryKind::Empirical:
                for (double s : samples_)
                    if (s > lo && s < hi && (pts.empty() || pts.back() != s)) pts.push_back(s);
                break;
        }
        return pts;
    }

private:
    ExpiryKind kind_ = ExpiryKind::Exponential;
    double mean_ = 1.0;    // exponential
    double value_ = 0.0;   // deterministic
    std::vector<double> samples_;  // empirical, sorted
};

struct LifetimeParams {
    double lambda = 1.0;            // expected key arrival rate
    double phi = 1.0;               // key discontinuation rate
    double t_h = 1.0;               // refresh horizon
    double session_duration = 1.0;  // T_s
    ExpiryDistribution expiry = ExpiryDistribution::exponential(1.0);

    void validate() const {
        if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
        if (!(phi > 0.0)) throw DomainError("phi must be positive");
        if (!(t_h > 0.0)) throw DomainError("t_h must be positive");
        if (!(session_duration > 0.0)) throw DomainError("session duration must be positive");
    }

    // Interval between refreshes; the reciprocal of the refresh rate.
    double step_width() const { return std::sqrt(2.0 * phi * t_h / lambda); }
};

inline double refresh_rate(const LifetimeParams& params) {
    params.validate();
    return std::sqrt(params.lambda / (2.0 * params.phi * params.t_h));
}

namespace detail {

// floor(x) with a relative nudge so that values representing exact step
// boundaries land on the boundary's step.
inline std::uint64_t nudged_floor(double x) {
    double f = std::floor(x);
    if (x - f > 1.0 - 1e-9) f += 1.0;
    return static_cast<std::uint64_t>(f);
}

}  // namespace detail

// Staircase CDF of the residual refresh time over a session: steps of width
// w = step_width rising by w/T_s, jumping to 1 past the last full step
// boundary inside the session. With T_s shorter than one step no boundary is
// reached and the staircase stays at 0.
inline double refresh_cdf(const LifetimeParams& params, double t) {
    params.validate();
    double session = params.session_duration;
    if (t < 0.0 || t > session) throw DomainError("refresh_cdf argument outside [0, T_s]");
    double w = params.step_width();
    std::uint64_t full_steps = detail::nudged_floor(session / w);
    std::uint64_t m = detail::nudged_floor(t / w);
    if (full_steps >= 1 && m >= full_steps) return 1.0;
    return static_cast<double>(m) * w / session;
}

inline std::uint64_t refresh_pmf_support_max(const LifetimeParams& params) {
    params.validate();
    double ratio = params.session_duration / params.step_width();
    std::uint64_t floor_val = detail::nudged_floor(ratio);
    return static_cast<double>(floor_val) >= ratio - 1e-9 ? floor_val : floor_val + 1;
}

// Uniform refresh-count mass w/T_s per interval; the boundary cell absorbs
// the residue so the masses sum to one.
inline double refresh_pmf(const LifetimeParams& params, std::uint64_t m) {
    params.validate();
    std::uint64_t support_max = refresh_pmf_support_max(params);
    if (m > support_max)
        throw DomainError("refresh_pmf index " + std::to_string(m) + " outside support [0, " +
                          std::to_string(support_max) + "]");
    double w = params.step_width();
    double session = params.session_duration;
    double uniform = w / session;
    double remaining = 1.0 - static_cast<double>(m) * uniform;
    return std::clamp(remaining, 0.0, uniform);
}

struct PdkgaDetail {
    double value = 0.0;      // clamped to [0, 1]
    double raw_value = 0.0;  // before clamping
    bool clamped = false;
    long evaluations = 0;
};

// P = 1 - (1/w) * integral of F_e over [0, w], evaluated by adaptive
// quadrature split at the known CDF discontinuities.
inline PdkgaDetail p_dkga_detailed(const LifetimeParams& params,
                                   num::QuadratureOptions quad = {}) {
    params.validate();
    double w = params.step_width();
    std::vector<double> cuts = params.expiry.breakpoints(0.0, w);
    cuts.insert(cuts.begin(), 0.0);
    cuts.push_back(w);

    double integral = 0.0;
    long evaluations = 0;
    num::QuadratureOptions piece = quad;
    piece.abs_tol = quad.abs_tol / static_cast<double>(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto outcome = num::integrate_adaptive(
            [&params](double t) { return params.expiry.cdf(t); }, cuts[i], cuts[i + 1], piece);
        integral += outcome.value;
        evaluations += outcome.evaluations;
    }

    PdkgaDetail out;
    out.raw_value = 1.0 - integral / w;
    out.value = std::clamp(out.raw_value, 0.0, 1.0);
    out.clamped = std::abs(out.raw_value - out.value) > quad.abs_tol;
    out.evaluations = evaluations;
    return out;
}

inline double p_dkga(const LifetimeParams& params) { return p_dkga_detailed(params).value; }

struct MonteCarloEstimate {
    double estimate = 0.0;
    double stderr_est = 0.0;
    std::size_t trials = 0;
};

// Renewal-picture oracle: the residual refresh time is uniform over one step
// interval; estimate P(t_e > t_r) directly.
inline MonteCarloEstimate p_dkga_monte_carlo(const LifetimeParams& params, std::size_t trials,
                                             std::uint64_t rng_seed) {
    params.validate();
    if (trials < 1000) throw ConfigError("Monte Carlo needs at least 1000 trials");
    double w = params.step_width();
    Xoshiro256ss rng(rng_seed);
    std::size_t survived = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        double residual = rng.next_double() * w;
        double expiry = params.expiry.sample(rng);
        if (expiry > residual) ++survived;
    }
    MonteCarloEstimate out;
    out.trials = trials;
    out.estimate = static_cast<double>(survived) / static_cast<double>(trials);
    out.stderr_est =
        std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
    return out;
}

inline double laplace_transform(const ExpiryDistribution& dist, double s) {
    return dist.laplace(s);
}

// Numeric route for the continuous kind, used to cross-check the closed form.
// Runs tighter than the survival-probability quadrature so the comparison
// resolves below 1e-9.
inline double laplace_transform_quadrature(const ExpiryDistribution& dist, double s,
                                           num::QuadratureOptions quad = {1e-12, 56, 1e-12}) {
    if (s < 0.0) throw DomainError("Laplace argument must be non-negative");
    if (dist.kind() != ExpiryKind::Exponential)
        throw DomainError("quadrature route requires a continuous density");
    double mean = dist.mean();
    double rate = 1.0 / mean;
    // Truncate where the integrand falls below ~1e-17 of its peak.
    double upper = 40.0 / (s + rate);
    auto outcome = num::integrate_adaptive(
        [s, rate](double t) { return std::exp(-s * t) * rate * std::exp(-rate * t); }, 0.0,
        upper, quad);
    return outcome.value;
}

}  // namespace qkg::lifetime
