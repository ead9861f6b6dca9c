// SPDX-License-Identifier: Apache-2.0
//
// Shared generators for the test suites.  Everything is seeded explicitly so
// failures reproduce.

#ifndef BDSPEC_TESTS_SUPPORT_HPP
#define BDSPEC_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bdspec/birth_death.hpp"
#include "bdspec/estimates.hpp"
#include "bdspec/weighted_path.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline double log_uniform(Rng& rng, double lo_exp10, double hi_exp10) {
    std::uniform_real_distribution<double> u(lo_exp10, hi_exp10);
    return std::pow(10.0, u(rng));
}

/// Random path with weights log-uniform over `decades` decades.  nu is then
/// scaled globally so that the Gershgorin bound is 1, which keeps every
/// eigenvalue in (0, 1] without changing the weight spread.
inline bdspec::WeightedPath random_path(Rng& rng, std::size_t n, double decades = 6.0,
                                        bool unit_scale = true) {
    std::vector<double> pi(n), nu(n - 1);
    for (double& w : pi) w = log_uniform(rng, -decades, 0.0);
    for (double& w : nu) w = log_uniform(rng, -decades, 0.0);
    bdspec::detail::normalize_in_place(pi);
    bdspec::WeightedPath path(std::move(pi), std::move(nu));
    if (unit_scale) {
        const double g = bdspec::gershgorin_bound(path);
        for (double& w : path.nu) w /= g;
    }
    return path;
}

inline std::size_t random_size(Rng& rng, std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> d(lo, hi);
    return d(rng);
}

/// Random irreducible birth-death chain.
inline bdspec::BirthDeathChain random_chain(Rng& rng, std::size_t m) {
    std::uniform_real_distribution<double> u(0.05, 0.45);
    std::vector<double> p(m, 0.0), q(m, 0.0), r(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) p[i] = u(rng);
    for (std::size_t i = 1; i < m; ++i) q[i] = u(rng);
    for (std::size_t i = 0; i < m; ++i) r[i] = 1.0 - p[i] - q[i];
    return bdspec::BirthDeathChain(std::move(p), std::move(q), std::move(r));
}

/// Random chain satisfying the separation hypothesis p_i + q_{i+1} <= 1
/// (rates drawn in (0, 1/2]).
inline bdspec::BirthDeathChain random_monotone_chain(Rng& rng, std::size_t m) {
    std::uniform_real_distribution<double> u(0.05, 0.5);
    std::vector<double> p(m, 0.0), q(m, 0.0), r(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) p[i] = u(rng);
    for (std::size_t i = 1; i < m; ++i) q[i] = u(rng);
    for (std::size_t i = 0; i < m; ++i) r[i] = 1.0 - p[i] - q[i];
    return bdspec::BirthDeathChain(std::move(p), std::move(q), std::move(r));
}

inline double srw_eigenvalue(std::size_t n, std::size_t j) {
    return 1.0 - std::cos(static_cast<double>(j) * std::acos(-1.0) / static_cast<double>(n));
}

inline double ehrenfest_eigenvalue(std::size_t n, std::size_t j) {
    return 2.0 * static_cast<double>(j) / static_cast<double>(n);
}

} // namespace testsupport

#endif // BDSPEC_TESTS_SUPPORT_HPP
