// SPDX-License-Identifier: Apache-2.0
//
// Closed-form spectral-gap bounds: the general hitting-time style lower
// bound, the Metropolis-chain brackets, bottleneck brackets built from
// explicit test functions, and the bottleneck asymptotic coefficient.

#ifndef BDSPEC_BOUNDS_HPP
#define BDSPEC_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdspec/errors.hpp"
#include "bdspec/weighted_path.hpp"

namespace bdspec {

struct GapBracket {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::string method;
};

namespace detail {

// prefix[i] = sum_{j<i} pi([0,j])/nu(j,j+1); suffix[i] = sum_{j>i} pi([j,..])/nu(j-1,j)
inline void hitting_sums(const WeightedPath& path, std::vector<double>& prefix,
                         std::vector<double>& suffix) {
    const std::size_t n = path.size();
    prefix.assign(n, 0.0);
    suffix.assign(n, 0.0);
    double mass = 0.0, acc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        mass += path.pi[j];
        acc += mass / path.nu[j];
        prefix[j + 1] = acc;
    }
    mass = 0.0;
    acc = 0.0;
    for (std::size_t j = n - 1; j > 0; --j) {
        mass += path.pi[j];
        acc += mass / path.nu[j - 1];
        suffix[j - 1] = acc;
    }
}

} // namespace detail

/// Lower bound on the spectral gap:
///   max_i min{ (sum_{j<i} pi([0,j])/nu(j,j+1))^{-1},
///              (sum_{j>i} pi([j,n])/nu(j-1,j))^{-1} },
/// computed in O(n) with prefix sums.  In chain language the two sums are
/// expected hitting times of vertex i from the two ends.
inline double gap_lower_bound(const WeightedPath& path) {
    std::vector<double> prefix, suffix;
    detail::hitting_sums(path, prefix, suffix);
    double best = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
        best = std::max(best, 1.0 / std::max(prefix[i], suffix[i]));
    return best;
}

/// The summed variant max_i (prefix_i + suffix_i)^{-1}; sandwiches the bound
/// above within a factor of two.
inline double gap_lower_bound_cprime(const WeightedPath& path) {
    std::vector<double> prefix, suffix;
    detail::hitting_sums(path, prefix, suffix);
    double best = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i)
        best = std::max(best, 1.0 / (prefix[i] + suffix[i]));
    return best;
}

/// Power sum eta_a(k, l) = sum_{i=k}^{l} i^a by direct summation.
inline double eta(double a, long long k, long long l) {
    if (k < 1 || k > l)
        throw std::invalid_argument("eta: need 1 <= k <= l");
    double s = 0.0;
    for (long long i = k; i <= l; ++i)
        s += std::pow(static_cast<double>(i), a);
    return s;
}

enum class MetropolisVariant { check, hat };

/// Gap bracket for the Metropolis chains with target densities (|i|+1)^a
/// (check) and (n-|i|+1)^a (hat) on {-n,..,n}:
///   check: [1/(8 eta_{-a}(1,n) eta_a(2,n+1)),  2/(eta_{-a}(1,n) eta_a(2,n+1))]
///   hat:   [1/(64 eta_a(1,h) eta_{-a}(h,n)),   1/(2 eta_a(1,h) eta_{-a}(h,n))],
/// h = ceil(n/2).
inline GapBracket metropolis_gap_bounds(std::size_t n, double a, MetropolisVariant variant) {
    if (n < 1)
        throw std::invalid_argument("metropolis_gap_bounds: n must be >= 1");
    if (!(a > 0.0))
        throw std::invalid_argument("metropolis_gap_bounds: a must be positive");
    GapBracket bracket;
    const long long ln = static_cast<long long>(n);
    if (variant == MetropolisVariant::check) {
        const double base = eta(-a, 1, ln) * eta(a, 2, ln + 1);
        bracket.lower = 1.0 / (8.0 * base);
        bracket.upper = 2.0 / base;
        bracket.method = "metropolis_check";
    } else {
        const long long h = (ln + 1) / 2;
        const double base = eta(a, 1, h) * eta(-a, h, ln);
        bracket.lower = 1.0 / (64.0 * base);
        bracket.upper = 1.0 / (2.0 * base);
        bracket.method = "metropolis_hat";
    }
    return bracket;
}

namespace detail {

// Exact Rayleigh quotient of the two-block test function cutting the path at
// bottleneck j: step from -(n-x+1) to x across that edge.
inline double two_block_quotient(std::size_t n, std::size_t x, double eps) {
    const double dn = static_cast<double>(n);
    const double dx = static_cast<double>(x);
    return eps * (dn + 1.0) / (dx * (dn - dx + 1.0));
}

} // namespace detail

/// Certified gap bracket for the uniform path with bottlenecks.
///
/// Upper bounds are Rayleigh quotients of explicit test functions: merging
/// the bottleneck edges bounds the gap by the uniform gap of the shortened
/// path, and combinations of two-block step functions give the window
/// minimum C_{n,2} = min over [m1,m2] of
///   (n+1) sum 1/eps_i / sum_{i<=j} x_i (n-x_j+1)/(eps_i eps_j),
/// enumerated in O(k^2) with running sums.  Lower bounds come from the
/// hitting-sum bound evaluated at the median vertex; conductances above 1
/// are clamped to 1 there, which only lowers the gap.
inline GapBracket bottleneck_bounds(std::size_t n,
                                    const std::vector<std::size_t>& positions,
                                    const std::vector<double>& epsilons) {
    bottleneck_path(n, positions, epsilons); // reuse the constructor validation
    const std::size_t k = positions.size();
    const double dn = static_cast<double>(n);
    GapBracket bracket;

    const double uniform_upper =
        2.0 * (1.0 - std::cos(std::numbers::pi / (dn - static_cast<double>(k) + 1.0)));

    if (k == 0) {
        bracket.method = "uniform";
        bracket.lower = 1.0 / (dn * dn / 4.0 + 1.0);
        bracket.upper = uniform_upper;
        return bracket;
    }

    if (k == 1) {
        const std::size_t x = std::min(positions[0], n - positions[0] + 1);
        const double eps = epsilons[0];
        const double eps_clamped = std::min(eps, 1.0);
        bracket.method = "bottleneck";
        bracket.lower = 1.0 / (dn * dn / 4.0 + static_cast<double>(x) / eps_clamped);
        bracket.upper = std::min(
            2.0 * (1.0 - std::cos(std::numbers::pi / (dn - static_cast<double>(x) + 1.0))),
            detail::two_block_quotient(n, positions[0], eps));
        return bracket;
    }

    bracket.method = "k_bottleneck";

    // lower: min{1/(4n^2), C_{n,1}/2}
    double denom = dn * dn / 4.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double eps = std::min(epsilons[j], 1.0);
        const double m = static_cast<double>(std::min(positions[j], n - positions[j] + 1));
        denom += m * (1.0 / eps - 1.0);
    }
    bracket.lower = std::min(1.0 / (4.0 * dn * dn), 0.5 / denom);

    // upper: min{uniform_upper, C_{n,2}} over all windows [m1, m2]
    double c2 = std::numeric_limits<double>::infinity();
    for (std::size_t m1 = 0; m1 < k; ++m1) {
        double inv_eps_sum = 0.0;
        double u_sum = 0.0; // running sum of x_i/eps_i over the window
        double quad = 0.0;  // sum_{i<=j} x_i (n-x_j+1) / (eps_i eps_j)
        for (std::size_t m2 = m1; m2 < k; ++m2) {
            const double x = static_cast<double>(positions[m2]);
            const double e = epsilons[m2];
            inv_eps_sum += 1.0 / e;
            u_sum += x / e;
            quad += (dn - x + 1.0) / e * u_sum;
            c2 = std::min(c2, (dn + 1.0) * inv_eps_sum / quad);
        }
    }
    bracket.upper = std::min(uniform_upper, c2);
    return bracket;
}

/// Coefficient of the n^-2 spectral-gap asymptotics for one bottleneck at
/// x_n ~ b n with eps_n ~ x_n/(a n^2).
struct BottleneckCoefficient {
    bool use_eps_over_x = false; // a = infinity: the gap follows eps_n/x_n instead
    double value = 0.0;
};

/// For b = 0 the n^2-normalized gap tends to min{pi^2, 1/a} (the second mode
/// is the two-block rate eps/x = 1/(a n^2)).  For b in (0, 1/2] the value
/// returned is the unique root in (0, 1) of
///   1 + 4 log 2 - pi^2/6 - pi^2 a C/(1-b) - b C kappa_b(C) = 0,
///   kappa_b(C) = sum_{i>=1} ((1-b) i^2 - b C)/((i^2 - C)[(1-b)^2 i^2 - b^2 C]),
/// located by bisection with the series truncated adaptively.  a = infinity
/// is signalled through use_eps_over_x.
inline BottleneckCoefficient bottleneck_asymptotic_coefficient(double a, double b) {
    if (!(a >= 0.0))
        throw std::invalid_argument("bottleneck_asymptotic_coefficient: a must be >= 0");
    if (!(b >= 0.0) || !(b <= 0.5))
        throw std::invalid_argument("bottleneck_asymptotic_coefficient: b must be in [0, 1/2]");
    BottleneckCoefficient out;
    if (std::isinf(a)) {
        out.use_eps_over_x = true;
        return out;
    }
    const double pi2 = std::numbers::pi * std::numbers::pi;
    if (b == 0.0) {
        out.value = a == 0.0 ? pi2 : std::min(pi2, 1.0 / a);
        return out;
    }

    const auto kappa = [&](double c) {
        // terms decay like 1/((1-b) i^2); the summation stops once the term
        // is negligible past the last sign irregularity (i > 1/sqrt(1-b))
        // and the remaining tail is added in closed form
        double s = 0.0;
        const double floor_i = 1.0 / std::sqrt(1.0 - b);
        int last = 1;
        for (int i = 1; i <= 100000; ++i) {
            last = i;
            const double i2 = static_cast<double>(i) * static_cast<double>(i);
            const double term = ((1.0 - b) * i2 - b * c) /
                                ((i2 - c) * ((1.0 - b) * (1.0 - b) * i2 - b * b * c));
            s += term;
            if (static_cast<double>(i) > floor_i && std::abs(term) < 1e-14 * std::abs(s) &&
                static_cast<double>(i) * std::abs(term) < 1e-14 * std::abs(s))
                break;
        }
        s += 1.0 / ((1.0 - b) * (static_cast<double>(last) + 0.5));
        return s;
    };
    const auto g = [&](double c) {
        return 1.0 + 4.0 * std::log(2.0) - pi2 / 6.0 - pi2 * a * c / (1.0 - b) -
               b * c * kappa(c);
    };
    double lo = 0.0, hi = 1.0 - 1e-12;
    if (!(g(lo + 1e-12) > 0.0))
        throw numeric_error("bottleneck_asymptotic_coefficient: no sign change");
    while (hi - lo > 1e-13)
        (g(0.5 * (lo + hi)) > 0.0 ? lo : hi) = 0.5 * (lo + hi);
    out.value = 0.5 * (lo + hi);
    return out;
}

enum class BottleneckProfile { finite, far_from_boundary, uniform };

/// Order-of-magnitude gap estimate for structured bottleneck families; the
/// returned value is an order, not a certified bracket.
///   finite:            min{1/n^2, min_i eps_i / min{x_i, n-x_i+1}}
///   far_from_boundary: min{1/n^2, (sum_i 1/eps_i)^{-1} / J}, J = max_i min{x_i, n-x_i+1}
///   uniform:           min{1/n^2, eps_1/(n k)} for x_i = floor(i n / k)
inline double uniform_bottleneck_order(std::size_t n,
                                       const std::vector<std::size_t>& positions,
                                       const std::vector<double>& epsilons,
                                       BottleneckProfile profile) {
    bottleneck_path(n, positions, epsilons);
    const std::size_t k = positions.size();
    if (k == 0)
        throw std::invalid_argument("uniform_bottleneck_order: need at least one bottleneck");
    const double dn = static_cast<double>(n);
    const double diffusive = 1.0 / (dn * dn);

    std::vector<double> halfdist(k);
    for (std::size_t i = 0; i < k; ++i)
        halfdist[i] = static_cast<double>(std::min(positions[i], n - positions[i] + 1));

    switch (profile) {
    case BottleneckProfile::finite: {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i)
            best = std::min(best, epsilons[i] / halfdist[i]);
        return std::min(diffusive, best);
    }
    case BottleneckProfile::far_from_boundary: {
        double inv = 0.0;
        for (const double e : epsilons) inv += 1.0 / e;
        const double j = *std::max_element(halfdist.begin(), halfdist.end());
        return std::min(diffusive, 1.0 / (inv * j));
    }
    case BottleneckProfile::uniform: {
        if (2 * k > n)
            throw std::invalid_argument("uniform_bottleneck_order: uniform profile needs k <= n/2");
        for (std::size_t i = 0; i < k; ++i)
            if (positions[i] != (i + 1) * n / k)
                throw std::invalid_argument(
                    "uniform_bottleneck_order: positions do not match floor(i n / k)");
        return std::min(diffusive, epsilons[0] / (dn * static_cast<double>(k)));
    }
    }
    throw std::invalid_argument("uniform_bottleneck_order: unknown profile");
}

} // namespace bdspec

#endif // BDSPEC_BOUNDS_HPP
