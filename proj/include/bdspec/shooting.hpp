// SPDX-License-Identifier: Apache-2.0
//
// Shooting recursions for the candidate eigenvector xi_lambda built from the
// left boundary:
//
//   xi(1) = -1,
//   xi(k+1) = xi(k) + { [xi(k) - xi(k-1)] nu(k-1,k) - lambda pi(k) xi(k) } / nu(k,k+1).
//
// The recursion is evaluated through its partial-sum form
// xi(l+1) = xi(l) - lambda T_l / nu(l,l+1), T_l = sum_{j<=l} pi(j) xi(j),
// which makes T_l -- the quantity whose sign every solver branches on -- the
// directly accumulated value instead of a difference of large terms.
//
// Profiles are classified into "type i": i maximal strictly monotone runs of
// alternating direction followed by a constant tail.  All classification and
// sign decisions are invariant under positive scaling, which justifies the
// power-of-two rescaling used to contain geometric growth.

#ifndef BDSPEC_SHOOTING_HPP
#define BDSPEC_SHOOTING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "bdspec/errors.hpp"
#include "bdspec/weighted_path.hpp"

namespace bdspec {

inline constexpr double kIncrementZeroTol = 1e-13; // relative to running max |xi|
inline constexpr double kPiMeanZeroTol = 1e-13;    // relative to sum pi|xi|
inline constexpr double kRescaleLimit = 0x1p100;

/// Endpoints (1-based, inclusive) of one strictly monotone run.
struct PeakValley {
    int a;
    int b;
};

struct TypeClassification {
    int type_index = 1;
    std::vector<PeakValley> peak_valleys;
    bool trailing_plateau = false;
};

namespace detail {

// Incremental monotone-run classifier fed one increment sign per step
// (0 = increment below the zero tolerance).  The shooting recursions derive
// these signs from the partial sums: the increment into vertex k+1 equals
// -lambda T_k / nu(k,k+1), so sign(increment) = -sign(T_k), and T_k is the
// directly accumulated quantity whose sign survives even when the profile
// values span hundreds of orders of magnitude.
class TypeTracker {
public:
    void feed(int sign) {
        ++pos_;
        if (sign == 0) return;
        if (last_sign_ != 0 && sign != last_sign_) {
            peaks_.push_back({run_start_, last_sig_pos_ + 1});
            run_start_ = pos_; // value preceding this increment
        }
        last_sign_ = sign;
        last_sig_pos_ = pos_;
    }

    bool degenerate() const { return last_sign_ == 0; }
    int type_index() const { return static_cast<int>(peaks_.size()) + 1; }

    TypeClassification finish(int n_values) && {
        if (degenerate())
            throw numeric_error("classify_type: all increments below tolerance");
        TypeClassification out;
        out.peak_valleys = std::move(peaks_);
        out.peak_valleys.push_back({run_start_, last_sig_pos_ + 1});
        out.type_index = static_cast<int>(out.peak_valleys.size());
        out.trailing_plateau = last_sig_pos_ + 1 < n_values;
        return out;
    }

private:
    int pos_ = 0; // 1-based increment counter
    int last_sign_ = 0;
    int last_sig_pos_ = 0;
    int run_start_ = 1;
    std::vector<PeakValley> peaks_;
};

} // namespace detail

/// Classify a vector per the monotone-run definition: type = 1 + number of
/// direction alternations among increments whose magnitude exceeds
/// zero_tol * (running max |value|).  Sub-tolerance increments inside the
/// vector produce the flat-pair layout a_{j+1} - b_j = 1; a sub-tolerance
/// final increment is reported as trailing_plateau.
inline TypeClassification classify_type(std::span<const double> values,
                                        double zero_tol = kIncrementZeroTol) {
    const std::size_t n = values.size();
    if (n == 0)
        throw std::invalid_argument("classify_type: empty input");
    if (!(values[0] < 0.0))
        throw std::invalid_argument("classify_type: values[0] must be negative");

    detail::TypeTracker tracker;
    double runmax = std::abs(values[0]);
    for (std::size_t j = 1; j < n; ++j) {
        runmax = std::max(runmax, std::abs(values[j]));
        const double inc = values[j] - values[j - 1];
        const bool significant = std::abs(inc) > zero_tol * runmax;
        tracker.feed(significant ? (inc > 0.0 ? 1 : -1) : 0);
    }
    return std::move(tracker).finish(static_cast<int>(n));
}

/// Sign-change positions s_1 < s_2 < ... (1-based): the l with
/// values[l] values[l-1] < 0 or values[l] = 0.  The result has n-1 entries;
/// absent changes are reported as n+1.
inline std::vector<int> sign_change_positions(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0)
        throw std::invalid_argument("sign_change_positions: empty input");
    std::vector<int> out;
    out.reserve(n - 1);
    for (std::size_t l = 1; l < n; ++l)
        if (values[l] * values[l - 1] < 0.0 || values[l] == 0.0)
            out.push_back(static_cast<int>(l) + 1);
    out.resize(n - 1, static_cast<int>(n) + 1);
    return out;
}

inline double dirichlet_form(const WeightedPath& path, std::span<const double> f) {
    if (f.size() != path.size())
        throw std::invalid_argument("dirichlet_form: size mismatch");
    double e = 0.0;
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
        const double d = f[k] - f[k + 1];
        e += d * d * path.nu[k];
    }
    return e;
}

inline double pi_mean(const WeightedPath& path, std::span<const double> f) {
    if (f.size() != path.size())
        throw std::invalid_argument("pi_mean: size mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        m += path.pi[k] * f[k];
    return m;
}

/// Var_pi(f) via weighted Welford; no cancellation against pi(f)^2.
inline double variance(const WeightedPath& path, std::span<const double> f) {
    if (f.size() != path.size())
        throw std::invalid_argument("variance: size mismatch");
    double w_total = 0.0, mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double w = path.pi[k];
        w_total += w;
        const double d = f[k] - mean;
        mean += (w / w_total) * d;
        m2 += w * d * (f[k] - mean);
    }
    return m2 / w_total;
}

/// E_nu(f,f) / Var_pi(f); rejects constant input.
inline double rayleigh_quotient(const WeightedPath& path, std::span<const double> f) {
    const double var = variance(path, f);
    if (!(var > 0.0))
        throw numeric_error("rayleigh_quotient: zero variance (constant input)");
    return dirichlet_form(path, f) / var;
}

/// Forward shooting profile.  values and partial_sums are in rescaled units:
/// the true xi is values * 2^log_scale.  partial_sums[k] = T_{k+1}, so the
/// last partial sum equals pi_mean by construction.
struct ShootingProfile {
    double lambda = 0.0;
    std::vector<double> values;
    std::vector<double> partial_sums;
    int type_index = 1;
    std::vector<PeakValley> peak_valleys;
    bool trailing_plateau = false;
    double pi_mean = 0.0;       // pi(xi), rescaled units
    double boundary_value = 0.0; // xi(n), rescaled units
    double abs_mass = 0.0;      // sum pi |xi|, rescaled units
    int log_scale = 0;

    /// -1, 0, +1 with the cancellation-aware relative zero test.
    int sign_of_pi_mean() const {
        if (std::abs(pi_mean) <= kPiMeanZeroTol * abs_mass) return 0;
        return pi_mean > 0.0 ? 1 : -1;
    }
};

namespace detail {

inline void check_shoot_args(const WeightedPath&, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("shoot: lambda must be positive and finite");
}

// One pass of the partial-sum recursion, storing the whole profile.  When a
// value passes the rescale limit the entire stored prefix is multiplied by
// 2^-100 (exact in floating point), so the output stays a coherent positive
// multiple of the true profile.  Classification runs alongside in the units
// current at each step; for extreme growth the head of the stored vector can
// underflow, but the classification and all sign data stay exact.
template <bool Clip1>
inline TypeTracker shoot_store(const WeightedPath& path, double lambda, double start,
                               std::vector<double>& values,
                               std::vector<double>& partial_sums, double& t_out,
                               double& s_out, int& log_scale, bool& trailing) {
    const std::size_t n = path.size();
    trailing = false;
    values.assign(n, 0.0);
    partial_sums.assign(n, 0.0);
    values[0] = start;
    double t = path.pi[0] * start;
    double s = std::abs(t);
    partial_sums[0] = t;
    log_scale = 0;
    TypeTracker tracker;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        // sign(increment) = -sign(T_k); only a bit-exact zero is a flat step.
        // A relative zero band here would swallow genuine alternations: the
        // true |T_k| can dwell many orders below sum pi|xi| with its sign
        // still exact.
        tracker.feed(t == 0.0 ? 0 : (t > 0.0 ? -1 : 1));
        if (k + 2 == n) trailing = std::abs(t) <= kPiMeanZeroTol * s;
        double inc = -lambda * t / path.nu[k];
        if constexpr (Clip1) inc = std::max(inc, 0.0);
        double v = values[k] + inc;
        if (!std::isfinite(v))
            throw numeric_error("shoot: profile overflowed between rescales");
        while (std::abs(v) > kRescaleLimit) {
            for (std::size_t j = 0; j <= k; ++j) {
                values[j] = std::ldexp(values[j], -100);
                partial_sums[j] = std::ldexp(partial_sums[j], -100);
            }
            t = std::ldexp(t, -100);
            s = std::ldexp(s, -100);
            v = std::ldexp(v, -100);
            log_scale += 100;
        }
        values[k + 1] = v;
        t += path.pi[k + 1] * v;
        s += std::abs(path.pi[k + 1] * v);
        partial_sums[k + 1] = t;
    }
    t_out = t;
    s_out = s;
    return tracker;
}

} // namespace detail

inline ShootingProfile shoot(const WeightedPath& path, double lambda) {
    detail::check_shoot_args(path, lambda);
    ShootingProfile p;
    p.lambda = lambda;
    bool trailing = false;
    detail::TypeTracker tracker =
        detail::shoot_store<false>(path, lambda, -1.0, p.values, p.partial_sums, p.pi_mean,
                                   p.abs_mass, p.log_scale, trailing);
    p.boundary_value = p.values.back();
    TypeClassification cls = std::move(tracker).finish(static_cast<int>(path.size()));
    p.type_index = cls.type_index;
    p.peak_valleys = std::move(cls.peak_valleys);
    p.trailing_plateau = trailing;
    return p;
}

/// Backward shooting profile xi~ with xi~(n) = -1, reported in the original
/// vertex order (values.back() = -1).  type_index and peak_valleys describe
/// the walk from the right end; peak positions are mapped back to original
/// 1-based labels.
inline ShootingProfile shoot_reverse(const WeightedPath& path, double lambda) {
    ShootingProfile p = shoot(reversed(path), lambda);
    const int n = static_cast<int>(path.size());
    std::reverse(p.values.begin(), p.values.end());
    std::reverse(p.partial_sums.begin(), p.partial_sums.end());
    p.boundary_value = p.values.front();
    for (PeakValley& pv : p.peak_valleys) {
        const int a = n + 1 - pv.b;
        const int b = n + 1 - pv.a;
        pv.a = a;
        pv.b = b;
    }
    std::reverse(p.peak_valleys.begin(), p.peak_valleys.end());
    return p;
}

/// xi_lambda^{(j)}: the profile clipped at its j-th direction change.
struct ClippedProfile {
    double lambda = 0.0;
    int clip_order = 1;
    std::vector<double> values;
    std::size_t plateau_start = 0; // 0-based first index of the trailing constant run
    double pi_mean = 0.0;
    double boundary_value = 0.0;
    double abs_mass = 0.0;
    double rayleigh = 0.0; // E_nu / Var_pi of the clipped vector
    int log_scale = 0;

    int sign_of_pi_mean() const {
        if (std::abs(pi_mean) <= kPiMeanZeroTol * abs_mass) return 0;
        return pi_mean > 0.0 ? 1 : -1;
    }
};

/// Order 1 runs the clipped recursion directly (increments floored at zero);
/// order j >= 2 truncates the unclipped profile at its j-th peak-valley
/// point b_j when the profile has type > j, and returns the unclipped
/// profile otherwise.  Both constructions agree for order 1.
inline ClippedProfile shoot_clipped(const WeightedPath& path, double lambda, int clip_order,
                                    double start_value = -1.0) {
    detail::check_shoot_args(path, lambda);
    if (clip_order < 1)
        throw std::invalid_argument("shoot_clipped: clip_order must be >= 1");
    if (!(start_value < 0.0))
        throw std::invalid_argument("shoot_clipped: start_value must be negative");
    const std::size_t n = path.size();
    ClippedProfile p;
    p.lambda = lambda;
    p.clip_order = clip_order;

    if (clip_order == 1) {
        std::vector<double> partial_sums;
        bool trailing = false;
        detail::shoot_store<true>(path, lambda, start_value, p.values, partial_sums,
                                  p.pi_mean, p.abs_mass, p.log_scale, trailing);
        // first index of the exact trailing constant run
        std::size_t s = n - 1;
        while (s > 0 && p.values[s] == p.values[s - 1]) --s;
        p.plateau_start = s;
    } else {
        ShootingProfile full = shoot(path, lambda);
        const double a = -start_value;
        p.log_scale = full.log_scale;
        p.values = std::move(full.values);
        for (double& v : p.values) v *= a;
        if (full.type_index > clip_order) {
            const std::size_t b = static_cast<std::size_t>(full.peak_valleys[clip_order - 1].b);
            const double plateau = p.values[b - 1];
            for (std::size_t k = b; k < n; ++k)
                p.values[k] = plateau;
            p.plateau_start = b - 1;
        } else {
            p.plateau_start = full.trailing_plateau ? n - 2 : n - 1;
        }
        p.pi_mean = pi_mean(path, p.values);
        p.abs_mass = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            p.abs_mass += std::abs(path.pi[k] * p.values[k]);
    }
    p.boundary_value = p.values.back();
    p.rayleigh = rayleigh_quotient(path, p.values);
    return p;
}

/// Allocation-free profile summary for the dichotomy solvers: the type
/// index, the trailing-plateau flag and the sign data of pi(xi), nothing
/// else.  Rescaling touches only the O(1) carried state here.
struct ShootScan {
    int type_index = 1;
    bool trailing_plateau = false;
    double pi_mean = 0.0;
    double abs_mass = 0.0;
    int log_scale = 0;

    int sign_of_pi_mean() const {
        if (std::abs(pi_mean) <= kPiMeanZeroTol * abs_mass) return 0;
        return pi_mean > 0.0 ? 1 : -1;
    }
};

namespace detail {

template <bool Clip1>
inline ShootScan shoot_stream(const WeightedPath& path, double lambda) {
    const std::size_t n = path.size();
    ShootScan out;
    double prev = -1.0;
    double t = path.pi[0] * prev;
    double s = std::abs(t);
    TypeTracker tracker;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        tracker.feed(t == 0.0 ? 0 : (t > 0.0 ? -1 : 1));
        if (k + 2 == n) out.trailing_plateau = std::abs(t) <= kPiMeanZeroTol * s;
        double inc = -lambda * t / path.nu[k];
        if constexpr (Clip1) inc = std::max(inc, 0.0);
        double cur = prev + inc;
        if (!std::isfinite(cur))
            throw numeric_error("shoot: profile overflowed between rescales");
        while (std::abs(cur) > kRescaleLimit) {
            prev = std::ldexp(prev, -100);
            cur = std::ldexp(cur, -100);
            t = std::ldexp(t, -100);
            s = std::ldexp(s, -100);
            out.log_scale += 100;
        }
        t += path.pi[k + 1] * cur;
        s += std::abs(path.pi[k + 1] * cur);
        prev = cur;
    }
    out.type_index = tracker.type_index();
    out.pi_mean = t;
    out.abs_mass = s;
    return out;
}

} // namespace detail

/// Streaming summary of shoot().
inline ShootScan shoot_scan(const WeightedPath& path, double lambda) {
    detail::check_shoot_args(path, lambda);
    return detail::shoot_stream<false>(path, lambda);
}

/// Streaming summary of the order-1 clipped recursion; only the pi_mean
/// sign data is meaningful for this variant.
inline ShootScan shoot_clipped_scan(const WeightedPath& path, double lambda) {
    detail::check_shoot_args(path, lambda);
    return detail::shoot_stream<true>(path, lambda);
}

} // namespace bdspec

#endif // BDSPEC_SHOOTING_HPP
