// SPDX-License-Identifier: Apache-2.0
//
// Eigenvalue solvers driven by the shooting recursion:
//
//  * a fixed-point iteration on the Rayleigh quotient of the clipped
//    profile, which decreases monotonically to the spectral gap;
//  * bracket-halving dichotomies for the gap (sign of pi(psi)) and for any
//    eigenvalue rank i (type of xi plus the sign of (-1)^{i-1} pi(xi));
//  * a full-spectrum driver running the rank dichotomy for every index.
//
// Each dichotomy halves its bracket exactly once per iteration, so the
// bracket width after l steps is (U0 - L0) 2^-l up to rounding.

#ifndef BDSPEC_SOLVERS_HPP
#define BDSPEC_SOLVERS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "bdspec/errors.hpp"
#include "bdspec/estimates.hpp"
#include "bdspec/shooting.hpp"
#include "bdspec/weighted_path.hpp"

namespace bdspec {

/// (0, U0] with U0 twice the largest generator diagonal.  The left end is
/// exclusive; dichotomies only evaluate interior midpoints.
inline std::pair<double, double> default_bracket(const WeightedPath& path) {
    return {0.0, gershgorin_bound(path)};
}

namespace detail {

inline void check_bracket(double lower, double upper) {
    if (!(lower >= 0.0) || !(upper > lower) || !std::isfinite(upper))
        throw std::invalid_argument("solver: need 0 <= L0 < U0 < inf");
}

// dichotomy branch sign: collapse only on a bit-exact zero
inline int raw_sign(double t) { return t == 0.0 ? 0 : (t > 0.0 ? 1 : -1); }

} // namespace detail

/// Rayleigh-quotient fixed-point iteration for the spectral gap:
/// lambda_{k+1} = E_nu(psi_k, psi_k) / Var_pi(psi_k) with psi_k the order-1
/// clipped profile at lambda_k started at -start_value.  After the first
/// step the sequence decreases strictly to the gap.  Stops when
/// lambda_k - lambda_{k+1} <= rel_tol * lambda_k (from k >= 1 on) or after
/// max_iter steps.
inline EigenEstimate solve_gap_a1(const WeightedPath& path, double lambda0,
                                  double start_value = 1.0, double rel_tol = 1e-13,
                                  int max_iter = 10000) {
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0))
        throw std::invalid_argument("solve_gap_a1: lambda0 must be positive");
    if (!(start_value > 0.0))
        throw std::invalid_argument("solve_gap_a1: start_value must be positive");
    if (!(rel_tol > 0.0) || max_iter < 1)
        throw std::invalid_argument("solve_gap_a1: bad tolerance or iteration cap");

    EigenEstimate est;
    est.index = 1;
    const double inf = std::numeric_limits<double>::infinity();
    est.history.push_back({lambda0, 0.0, inf});
    double lambda = lambda0;
    for (int k = 0; k < max_iter; ++k) {
        const ClippedProfile psi = shoot_clipped(path, lambda, 1, -start_value);
        const double next = psi.rayleigh;
        est.history.push_back({next, 0.0, next});
        ++est.iterations;
        if (k >= 1 && lambda - next <= rel_tol * lambda) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    est.lower = 0.0;
    est.upper = lambda;
    est.estimate = lambda;
    return est;
}

/// Dichotomy for the spectral gap.  The sign of pi(psi_lambda) of the
/// order-1 clipped profile is negative below the gap and positive above it,
/// so each midpoint halves the bracket; a bit-exact zero pi(psi) is an exact
/// eigenvalue hit and collapses the bracket.  (A relative zero band would
/// misfire here: on heavy-tailed paths the true |pi(psi)| stays many orders
/// below sum pi|psi| across whole windows while its sign is still exact.)
/// Both bracket ends are sign checked up front; a bracket that provably
/// excludes the gap is an error.
inline EigenEstimate solve_gap_a2(const WeightedPath& path, double lower, double upper,
                                  Tolerance tol = {}, bool record_history = true) {
    detail::check_bracket(lower, upper);
    EigenEstimate est;
    est.index = 1;

    if (lower > 0.0) {
        const int s = detail::raw_sign(shoot_clipped_scan(path, lower).pi_mean);
        if (s > 0)
            throw numeric_error("solve_gap_a2: pi(psi) > 0 at L0; bracket excludes the gap");
        if (s == 0) {
            est.lower = est.upper = est.estimate = lower;
            est.exact_hit = true;
            return est;
        }
    }
    {
        const int s = detail::raw_sign(shoot_clipped_scan(path, upper).pi_mean);
        if (s < 0)
            throw numeric_error("solve_gap_a2: pi(psi) < 0 at U0; bracket excludes the gap");
        if (s == 0) {
            est.lower = est.upper = est.estimate = upper;
            est.exact_hit = true;
            return est;
        }
    }

    while (upper - lower > tol.threshold(upper)) {
        const double mid = 0.5 * (lower + upper);
        if (mid <= lower || mid >= upper) break; // bracket at floating-point resolution
        if (record_history) est.history.push_back({mid, lower, upper});
        const int s = detail::raw_sign(shoot_clipped_scan(path, mid).pi_mean);
        ++est.iterations;
        if (s > 0) {
            upper = mid;
        } else if (s < 0) {
            lower = mid;
        } else {
            lower = upper = mid;
            est.exact_hit = true;
            break;
        }
    }
    est.lower = lower;
    est.upper = upper;
    est.estimate = 0.5 * (lower + upper);
    return est;
}

/// Dichotomy for the i-th nonzero eigenvalue.  The type of the unclipped
/// profile locates lambda relative to the eigenvalues of the leading
/// principal submatrix; when the type equals i the sign of
/// (-1)^{i-1} pi(xi_lambda) decides the half.  The collapse branch fires on
/// pi(xi) = 0 under the relative zero test.  (This branch is sometimes
/// stated with pi(xi) > 0 in place of pi(xi) = 0; the positive reading
/// duplicates the shrink-upper case above it, so the zero reading is the
/// consistent one and is what the bracket guarantee requires.)
inline EigenEstimate solve_eigen_di(const WeightedPath& path, int index, double lower,
                                    double upper, Tolerance tol = {},
                                    bool record_history = true) {
    const std::size_t n = path.size();
    if (index < 1 || static_cast<std::size_t>(index) > n - 1)
        throw std::invalid_argument("solve_eigen_di: index must be in 1..n-1");
    detail::check_bracket(lower, upper);

    EigenEstimate est;
    est.index = index;
    while (upper - lower > tol.threshold(upper)) {
        const double mid = 0.5 * (lower + upper);
        if (mid <= lower || mid >= upper) break; // bracket at floating-point resolution
        if (record_history) est.history.push_back({mid, lower, upper});
        const ShootScan scan = shoot_scan(path, mid);
        ++est.iterations;
        if (scan.type_index > index) {
            upper = mid;
        } else if (scan.type_index < index) {
            lower = mid;
        } else {
            const int s = detail::raw_sign(scan.pi_mean);
            const int oriented = (index % 2 == 1) ? s : -s; // sign of (-1)^{i-1} pi(xi)
            if (s == 0) {
                lower = upper = mid;
                est.exact_hit = true;
                break;
            }
            if (oriented > 0)
                upper = mid;
            else
                lower = mid;
        }
    }
    est.lower = lower;
    est.upper = upper;
    est.estimate = 0.5 * (lower + upper);
    return est;
}

/// All eigenvalues: lambda_0 = 0 analytically, ranks 1..n-1 each by its own
/// dichotomy over the shared default bracket.  The per-rank solves are
/// independent and side-effect-free; jobs > 1 fans them out over threads
/// with results assembled in index order.
inline Spectrum full_spectrum(const WeightedPath& path, Tolerance tol = {}, int jobs = 1,
                              bool record_history = false) {
    const std::size_t n = path.size();
    const auto [l0, u0] = default_bracket(path);
    std::vector<EigenEstimate> estimates(n - 1);

    auto solve_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            estimates[i] = solve_eigen_di(path, static_cast<int>(i) + 1, l0, u0, tol,
                                          record_history);
    };

    const std::size_t tasks = n - 1;
    const std::size_t workers =
        std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(tasks, 1));
    if (workers <= 1) {
        solve_range(0, tasks);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (tasks + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(tasks, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(solve_range, begin, end);
        }
        for (std::thread& th : pool) th.join();
    }

    Spectrum spectrum;
    spectrum.eigenvalues.resize(n);
    spectrum.eigenvalues[0] = 0.0;
    for (std::size_t i = 0; i < tasks; ++i)
        spectrum.eigenvalues[i + 1] = estimates[i].estimate;
    spectrum.estimates = std::move(estimates);
    spectrum.check_strictly_sorted();
    return spectrum;
}

/// Trace of the fixed-point iteration lambda_{l+1} = L^{(i)}(lambda_l),
/// where L^{(i)} is the Rayleigh quotient of the order-i clipped profile.
struct LIterationTrace {
    std::vector<double> lambdas;
    double lambda_star = 0.0;
    bool converged = false;
};

/// Iterate L^{(i)} from lambda0.  lambda_star is the limit when the trace
/// converges; otherwise it is the supremum over strict local minima of the
/// trace (and the smallest trace value if no interior minimum exists).
/// Started above the i-th eigenvalue, lambda_star never exceeds it.
inline LIterationTrace iterate_L(const WeightedPath& path, int index, double lambda0,
                                 int max_iter = 10000, double rel_tol = 1e-13) {
    const std::size_t n = path.size();
    if (index < 1 || static_cast<std::size_t>(index) > n - 1)
        throw std::invalid_argument("iterate_L: index must be in 1..n-1");
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0))
        throw std::invalid_argument("iterate_L: lambda0 must be positive");

    LIterationTrace trace;
    trace.lambdas.push_back(lambda0);
    double lambda = lambda0;
    for (int k = 0; k < max_iter; ++k) {
        const double next = shoot_clipped(path, lambda, index).rayleigh;
        trace.lambdas.push_back(next);
        if (std::abs(next - lambda) <= rel_tol * lambda) {
            trace.converged = true;
            lambda = next;
            break;
        }
        lambda = next;
    }
    if (trace.converged) {
        trace.lambda_star = lambda;
    } else {
        double star = -std::numeric_limits<double>::infinity();
        const std::vector<double>& xs = trace.lambdas;
        for (std::size_t k = 1; k + 1 < xs.size(); ++k)
            if (xs[k - 1] > xs[k] && xs[k] < xs[k + 1])
                star = std::max(star, xs[k]);
        if (!std::isfinite(star))
            star = *std::min_element(xs.begin(), xs.end());
        trace.lambda_star = star;
    }
    return trace;
}

/// Integer interval of eigenvalue ranks consistent with the two one-sided
/// profiles at a split vertex: the true rank r (lambda_r < lambda < lambda_{r+1})
/// satisfies lo <= r <= hi.
struct RankBracket {
    int lo;
    int hi;
};

/// Locate lambda in the spectrum from the forward profile restricted to
/// {1..split} and the backward profile restricted to {split..n}.  split is
/// the 1-based gluing vertex and must be interior (both restrictions need at
/// least two vertices).
inline RankBracket locate_with_two_sided(const WeightedPath& path, double lambda,
                                         std::size_t split) {
    const std::size_t n = path.size();
    if (split < 2 || split > n - 1)
        throw std::invalid_argument("locate_with_two_sided: split must be in 2..n-1");
    detail::check_shoot_args(path, lambda);

    const ShootingProfile fwd = shoot(path, lambda);
    const ShootingProfile bwd = shoot(reversed(path), lambda);

    const std::span<const double> fseg(fwd.values.data(), split);
    const std::span<const double> bseg(bwd.values.data(), n - split + 1);
    const TypeClassification fcls = classify_type(fseg);
    const TypeClassification bcls = classify_type(bseg);

    const double fval = fwd.values[split - 1];
    const double bval = bwd.values[n - split];
    const double fscale = *std::max_element(fseg.begin(), fseg.end(),
                                            [](double a, double b) {
                                                return std::abs(a) < std::abs(b);
                                            });
    const double bscale = *std::max_element(bseg.begin(), bseg.end(),
                                            [](double a, double b) {
                                                return std::abs(a) < std::abs(b);
                                            });
    if (std::abs(fval) <= kIncrementZeroTol * std::abs(fscale) ||
        std::abs(bval) <= kIncrementZeroTol * std::abs(bscale))
        throw numeric_error("locate_with_two_sided: profile vanishes at the split");

    const int i = fcls.type_index;
    const int j = bcls.type_index;
    const bool fpos = ((i % 2 == 0) ? fval : -fval) > 0.0; // (-1)^i xi(split) > 0
    const bool bpos = ((j % 2 == 0) ? bval : -bval) > 0.0;

    RankBracket out{};
    if (fpos && bpos) {
        out.lo = out.hi = i + j - 2;
    } else if (!fpos && !bpos) {
        out.lo = i + j - 1;
        out.hi = i + j;
    } else {
        out.lo = i + j - 2;
        out.hi = i + j - 1;
    }
    out.lo = std::max(out.lo, 0);
    out.hi = std::min(out.hi, static_cast<int>(n) - 1);
    return out;
}

} // namespace bdspec

#endif // BDSPEC_SOLVERS_HPP
