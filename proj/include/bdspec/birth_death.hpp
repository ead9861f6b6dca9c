// SPDX-License-Identifier: Apache-2.0
//
// Birth and death chains on {0,..,m-1}: transition matrix
//
//   K(i,i+1) = p[i],  K(i,i-1) = q[i],  K(i,i) = r[i],
//
// with p[m-1] = q[0] = 0 and p + q + r = 1 rowwise.  An irreducible chain
// maps to a weighted path via its stationary distribution,
// nu(i,i+1) = pi(i) p(i), and the spectral gap of that path is the smallest
// nonzero eigenvalue of I - K.

#ifndef BDSPEC_BIRTH_DEATH_HPP
#define BDSPEC_BIRTH_DEATH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdspec/weighted_path.hpp"

namespace bdspec {

struct BirthDeathChain {
    std::vector<double> p; // birth rates, p[m-1] = 0
    std::vector<double> q; // death rates, q[0] = 0
    std::vector<double> r; // holding rates

    BirthDeathChain(std::vector<double> p_in, std::vector<double> q_in,
                    std::vector<double> r_in)
        : p(std::move(p_in)), q(std::move(q_in)), r(std::move(r_in)) {
        validate();
    }

    std::size_t size() const { return p.size(); }

    bool irreducible() const {
        const std::size_t m = p.size();
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (!(p[i] > 0.0) || !(q[i + 1] > 0.0))
                return false;
        return true;
    }

    void validate() const {
        const std::size_t m = p.size();
        if (m < 2)
            throw std::invalid_argument("BirthDeathChain: need at least 2 states");
        if (q.size() != m || r.size() != m)
            throw std::invalid_argument("BirthDeathChain: p, q, r must have equal length");
        if (p[m - 1] != 0.0 || q[0] != 0.0)
            throw std::invalid_argument("BirthDeathChain: require p[m-1] = 0 and q[0] = 0");
        for (std::size_t i = 0; i < m; ++i) {
            if (!(p[i] >= 0.0 && p[i] <= 1.0) || !(q[i] >= 0.0 && q[i] <= 1.0) ||
                !(r[i] >= 0.0 && r[i] <= 1.0))
                throw std::invalid_argument("BirthDeathChain: rates must lie in [0, 1]");
            if (std::abs(p[i] + q[i] + r[i] - 1.0) > kProbabilitySumTol)
                throw std::invalid_argument("BirthDeathChain: row " + std::to_string(i) +
                                            " does not sum to 1");
        }
    }
};

/// Stationary distribution of an irreducible chain and the conductances
/// nu(i,i+1) = pi(i) p(i).  The stationary weights satisfy
/// pi(i) = c (p_0 ... p_{i-1})/(q_1 ... q_i); they are accumulated as
/// cumulative log-ratios and exponentiated against the running maximum, so
/// long chains with skewed rates do not overflow.
inline WeightedPath from_birth_death(const BirthDeathChain& chain) {
    const std::size_t m = chain.size();
    if (!chain.irreducible())
        throw std::invalid_argument("from_birth_death: chain is not irreducible");
    std::vector<double> logw(m, 0.0);
    double logmax = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        logw[i] = logw[i - 1] + std::log(chain.p[i - 1]) - std::log(chain.q[i]);
        logmax = std::max(logmax, logw[i]);
    }
    std::vector<double> pi(m);
    for (std::size_t i = 0; i < m; ++i)
        pi[i] = std::exp(logw[i] - logmax);
    detail::normalize_in_place(pi);
    std::vector<double> nu(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
        nu[i] = pi[i] * chain.p[i];
    return WeightedPath(std::move(pi), std::move(nu));
}

/// Ehrenfest chain on {0,..,n}: p[i] = 1 - i/n, q[i] = i/n, no holding.
/// The eigenvalues of I - K are 2j/n, j = 0..n.
inline BirthDeathChain ehrenfest(std::size_t n) {
    if (n < 1)
        throw std::invalid_argument("ehrenfest: n must be >= 1");
    const double dn = static_cast<double>(n);
    std::vector<double> p(n + 1), q(n + 1), r(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        q[i] = static_cast<double>(i) / dn;
        p[i] = 1.0 - q[i];
    }
    p[n] = 0.0;
    q[0] = 0.0;
    return BirthDeathChain(std::move(p), std::move(q), std::move(r));
}

/// Simple random walk on n sites as a birth-death chain: steps left/right
/// with probability 1/2, holding 1/2 at the two ends.  Converting it with
/// from_birth_death reproduces simple_random_walk(n).
inline BirthDeathChain srw_chain(std::size_t n) {
    if (n < 2)
        throw std::invalid_argument("srw_chain: n must be >= 2");
    std::vector<double> p(n, 0.5), q(n, 0.5), r(n, 0.0);
    p[n - 1] = 0.0;
    q[0] = 0.0;
    r[0] = 0.5;
    r[n - 1] = 0.5;
    return BirthDeathChain(std::move(p), std::move(q), std::move(r));
}

namespace detail {

// Metropolis chains of Section-5 type live on {-n,..,n}; states are stored
// as j = i + n in 0..2n.  ratio_pow = (k/(k+1))^a style acceptance ratios
// are formed from the target density ratios directly.
struct MetropolisRates {
    std::vector<double> p, q, r;
};

inline void metropolis_check_args(std::size_t n, double a) {
    if (n < 1)
        throw std::invalid_argument("metropolis chain: n must be >= 1");
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("metropolis chain: a must be positive");
}

} // namespace detail

/// Metropolis chain for the target density ~ (|i|+1)^a on {-n,..,n}, built
/// from the simple random walk proposal.  Moves away from 0 are always
/// accepted; moves toward 0 are accepted with ratio (|i|)^a/(|i|+1)^a.
inline BirthDeathChain metropolis_check(std::size_t n, double a) {
    detail::metropolis_check_args(n, a);
    const std::size_t m = 2 * n + 1;
    std::vector<double> p(m, 0.0), q(m, 0.0), r(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const long long i = static_cast<long long>(j) - static_cast<long long>(n);
        const double ai = static_cast<double>(std::llabs(i));
        if (i == 0) {
            // both neighbours are uphill
            p[j] = 0.5;
            q[j] = 0.5;
        } else if (i > 0) {
            // right move goes uphill, left move downhill
            if (j + 1 < m) p[j] = 0.5;
            q[j] = 0.5 * std::pow(ai / (ai + 1.0), a);
        } else {
            // mirror image
            p[j] = 0.5 * std::pow(ai / (ai + 1.0), a);
            if (j > 0) q[j] = 0.5;
        }
        r[j] = 1.0 - p[j] - q[j];
    }
    return BirthDeathChain(std::move(p), std::move(q), std::move(r));
}

/// Metropolis chain for the target density ~ (n-|i|+1)^a on {-n,..,n}
/// (peaked at 0).  Moves toward 0 are always accepted; moves away are
/// accepted with ratio (n-|i|)^a/(n-|i|+1)^a.
inline BirthDeathChain metropolis_hat(std::size_t n, double a) {
    detail::metropolis_check_args(n, a);
    const std::size_t m = 2 * n + 1;
    std::vector<double> p(m, 0.0), q(m, 0.0), r(m, 0.0);
    const double dn = static_cast<double>(n);
    for (std::size_t j = 0; j < m; ++j) {
        const long long i = static_cast<long long>(j) - static_cast<long long>(n);
        const double s = dn - static_cast<double>(std::llabs(i)); // n - |i|
        if (i > 0) {
            q[j] = 0.5;
            if (j + 1 < m) p[j] = 0.5 * std::pow(s / (s + 1.0), a);
        } else if (i < 0) {
            p[j] = 0.5;
            if (j > 0) q[j] = 0.5 * std::pow(s / (s + 1.0), a);
        } else {
            const double accept = 0.5 * std::pow(s / (s + 1.0), a);
            p[j] = accept;
            q[j] = accept;
        }
        r[j] = 1.0 - p[j] - q[j];
    }
    return BirthDeathChain(std::move(p), std::move(q), std::move(r));
}

} // namespace bdspec

#endif // BDSPEC_BIRTH_DEATH_HPP
