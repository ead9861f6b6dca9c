// SPDX-License-Identifier: Apache-2.0
//
// Weighted finite paths: a vertex probability measure pi and positive edge
// conductances nu on the path graph.  The associated generator is the
// tridiagonal matrix
//
//   M(i,j) = -nu(i,j)/pi(i)                        for |i-j| = 1,
//   M(i,i) = [nu(i-1,i) + nu(i,i+1)] / pi(i),
//
// whose eigenvalues this library computes.  Vertices are stored 0-based;
// nu[k] is the conductance of edge {k, k+1}.

#ifndef BDSPEC_WEIGHTED_PATH_HPP
#define BDSPEC_WEIGHTED_PATH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdspec/errors.hpp"

namespace bdspec {

inline constexpr double kProbabilitySumTol = 1e-12;

namespace detail {

// Kahan-compensated sum; keeps the probability-mass check meaningful for
// paths with ~1e5 vertices, where a plain sum drifts past 1e-12.
inline double compensated_sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

inline void normalize_in_place(std::vector<double>& w) {
    const double s = compensated_sum(w);
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::invalid_argument("normalize: weights must have positive finite mass");
    for (double& x : w) x /= s;
}

} // namespace detail

struct WeightedPath {
    std::vector<double> pi; // vertex weights, positive, sum to 1
    std::vector<double> nu; // edge conductances, positive, size n-1

    WeightedPath(std::vector<double> pi_in, std::vector<double> nu_in)
        : pi(std::move(pi_in)), nu(std::move(nu_in)) {
        validate();
    }

    std::size_t size() const { return pi.size(); }

    void validate() const {
        const std::size_t n = pi.size();
        if (n < 2)
            throw std::invalid_argument("WeightedPath: need at least 2 vertices");
        if (nu.size() != n - 1)
            throw std::invalid_argument("WeightedPath: nu must have n-1 entries");
        for (double w : pi)
            if (!(w > 0.0) || !std::isfinite(w))
                throw std::invalid_argument("WeightedPath: pi entries must be positive");
        const double mass = detail::compensated_sum(pi);
        if (std::abs(mass - 1.0) > kProbabilitySumTol)
            throw std::invalid_argument(
                "WeightedPath: pi must sum to 1 (got " + std::to_string(mass) + ")");
        for (double w : nu)
            if (!(w > 0.0) || !std::isfinite(w))
                throw std::invalid_argument("WeightedPath: nu entries must be positive");
    }
};

/// Uniform path: pi = 1/n, nu = 1/(2n).  This is the simple random walk on
/// n vertices with reflecting probability 1/2 at the boundary; its nonzero
/// eigenvalues are 1 - cos(j pi / n).
inline WeightedPath simple_random_walk(std::size_t n) {
    if (n < 2)
        throw std::invalid_argument("simple_random_walk: n must be >= 2");
    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> nu(n - 1, 1.0 / (2.0 * static_cast<double>(n)));
    return WeightedPath(std::move(pi), std::move(nu));
}

/// Uniform path on {0,..,n} whose edge {x_j - 1, x_j} carries conductance
/// epsilon_j/(n+1) instead of 1/(n+1).  positions are 1-based edge labels,
/// strictly increasing, each in 1..n.
inline WeightedPath bottleneck_path(std::size_t n,
                                    const std::vector<std::size_t>& positions,
                                    const std::vector<double>& epsilons) {
    if (n < 1)
        throw std::invalid_argument("bottleneck_path: n must be >= 1");
    if (positions.size() != epsilons.size())
        throw std::invalid_argument("bottleneck_path: positions/epsilons size mismatch");
    const double unit = 1.0 / static_cast<double>(n + 1);
    std::vector<double> pi(n + 1, unit);
    std::vector<double> nu(n, unit);
    std::size_t prev = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
        const std::size_t x = positions[j];
        if (x < 1 || x > n)
            throw std::invalid_argument("bottleneck_path: position out of range 1..n");
        if (j > 0 && x <= prev)
            throw std::invalid_argument("bottleneck_path: positions must be strictly increasing");
        if (!(epsilons[j] > 0.0))
            throw std::invalid_argument("bottleneck_path: epsilons must be positive");
        nu[x - 1] = epsilons[j] * unit;
        prev = x;
    }
    return WeightedPath(std::move(pi), std::move(nu));
}

/// Restriction of (pi, nu) to the first m vertices.  Both measures are
/// scaled by 1/pi([0,m)) so that pi keeps mass 1; the generator restricted
/// to the kept vertices is unchanged by the common scaling.
inline WeightedPath principal_subpath(const WeightedPath& path, std::size_t m) {
    const std::size_t n = path.size();
    if (m < 2 || m > n)
        throw std::invalid_argument("principal_subpath: m must be in 2..n");
    std::vector<double> pi(path.pi.begin(), path.pi.begin() + static_cast<std::ptrdiff_t>(m));
    std::vector<double> nu(path.nu.begin(), path.nu.begin() + static_cast<std::ptrdiff_t>(m - 1));
    const double c = 1.0 / detail::compensated_sum(pi);
    for (double& w : pi) w *= c;
    for (double& w : nu) w *= c;
    return WeightedPath(std::move(pi), std::move(nu));
}

/// Same path walked from the other end.
inline WeightedPath reversed(const WeightedPath& path) {
    std::vector<double> pi(path.pi.rbegin(), path.pi.rend());
    std::vector<double> nu(path.nu.rbegin(), path.nu.rend());
    return WeightedPath(std::move(pi), std::move(nu));
}

} // namespace bdspec

#endif // BDSPEC_WEIGHTED_PATH_HPP
