// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations used only for validation.  The eigenvalue
// counter works on the symmetrized tridiagonal form of the generator, whose
// off-diagonal products b_i = nu(i,i+1)^2 / (pi(i) pi(i+1)) are positive, so
// the classic Sturm pivot recursion applies; everything here is independent
// of the shooting solver it cross-checks.

#ifndef BDSPEC_ORACLE_HPP
#define BDSPEC_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bdspec/birth_death.hpp"
#include "bdspec/estimates.hpp"
#include "bdspec/weighted_path.hpp"

namespace bdspec {

/// Number of eigenvalues of the generator strictly below lambda, from the
/// signs of the Sturm pivot sequence q_k = d_k - lambda - b_{k-1}/q_{k-1}
/// (the ratio form of the three-term determinant recursion; dividing by the
/// previous determinant at every step keeps the values bounded).
inline int sturm_count(const WeightedPath& path, double lambda) {
    const std::size_t n = path.size();
    double bmax = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double b = path.nu[i] * path.nu[i] / (path.pi[i] * path.pi[i + 1]);
        bmax = std::max(bmax, b);
    }
    // conventional safeguard against an exact-zero pivot at an eigenvalue hit
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, bmax);

    int count = 0;
    double q = path.nu[0] / path.pi[0] - lambda;
    if (std::abs(q) < pivmin) q = pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        const double left = path.nu[i - 1];
        const double right = i + 1 < n ? path.nu[i] : 0.0;
        const double d = (left + right) / path.pi[i];
        const double b = left * left / (path.pi[i - 1] * path.pi[i]);
        q = d - lambda - b / q;
        if (std::abs(q) < pivmin) q = pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

/// All n eigenvalues by bisection on the count function.
inline Spectrum oracle_spectrum(const WeightedPath& path, Tolerance tol = {}) {
    const std::size_t n = path.size();
    const double upper = gershgorin_bound(path);
    // Eigenvalues are >= 0; a slightly negative floor absorbs rounding of
    // the zero eigenvalue in the symmetrized form.
    const double floor0 =
        -16.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n) * upper;

    Spectrum spectrum;
    spectrum.eigenvalues.resize(n);
    spectrum.estimates.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t rank = 0; rank < n; ++rank) {
        double lo = floor0, hi = upper;
        const int want = static_cast<int>(rank) + 1;
        int iters = 0;
        while (hi - lo > tol.threshold(std::abs(hi))) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break; // bracket at floating-point resolution
            if (sturm_count(path, mid) >= want)
                hi = mid;
            else
                lo = mid;
            ++iters;
        }
        const double value = 0.5 * (lo + hi);
        if (rank == 0) {
            spectrum.eigenvalues[0] = 0.0; // known analytically
        } else {
            spectrum.eigenvalues[rank] = value;
            EigenEstimate est;
            est.index = static_cast<int>(rank);
            est.lower = lo;
            est.upper = hi;
            est.estimate = value;
            est.iterations = iters;
            spectrum.estimates.push_back(est);
        }
    }
    spectrum.check_strictly_sorted();
    return spectrum;
}

/// det A_i(lambda) from the three-term recursion
///   det A_l = a_l det A_{l-1} - (pi(l+1)/pi(l)) det A_{l-2},
/// a_l = 1 + pi(l+1)/pi(l) - lambda pi(l+1)/nu(l,l+1); indices here are the
/// 1-based ones of the matrix family, 1 <= i <= n-1.  Returned as
/// value * 2^exponent to survive long products.
struct ScaledValue {
    double value;
    int exponent;

    double to_double() const { return std::ldexp(value, exponent); }
};

inline ScaledValue det_a(const WeightedPath& path, double lambda, std::size_t i) {
    const std::size_t n = path.size();
    if (i < 1 || i > n - 1)
        throw std::invalid_argument("det_a: order must be in 1..n-1");
    double prev = 1.0; // det A_0
    double cur = 1.0 + path.pi[1] / path.pi[0] - lambda * path.pi[1] / path.nu[0]; // det A_1
    int exponent = 0;
    for (std::size_t l = 2; l <= i; ++l) {
        const double ratio = path.pi[l] / path.pi[l - 1];
        const double a = 1.0 + ratio - lambda * path.pi[l] / path.nu[l - 1];
        const double next = a * cur - ratio * prev;
        prev = cur;
        cur = next;
        const double mag = std::max(std::abs(cur), std::abs(prev));
        if (mag > 0x1p200 || (mag > 0.0 && mag < 0x1p-200)) {
            int e;
            std::frexp(mag, &e);
            prev = std::ldexp(prev, -e);
            cur = std::ldexp(cur, -e);
            exponent += e;
        }
    }
    return {cur, exponent};
}

/// mu K^steps by repeated tridiagonal multiplication.
inline std::vector<double> evolve(const BirthDeathChain& chain, std::vector<double> mu,
                                  int steps) {
    const std::size_t m = chain.size();
    if (mu.size() != m)
        throw std::invalid_argument("evolve: distribution size mismatch");
    if (steps < 0)
        throw std::invalid_argument("evolve: steps must be >= 0");
    std::vector<double> next(m);
    for (int s = 0; s < steps; ++s) {
        for (std::size_t j = 0; j < m; ++j) {
            double v = mu[j] * chain.r[j];
            if (j > 0) v += mu[j - 1] * chain.p[j - 1];
            if (j + 1 < m) v += mu[j + 1] * chain.q[j + 1];
            next[j] = v;
        }
        mu.swap(next);
    }
    return mu;
}

/// mu e^{-t(I-K)} as a Poisson mixture sum_l e^{-t} t^l / l! mu K^l with the
/// tail truncated below 1e-13.
inline std::vector<double> evolve_continuous(const BirthDeathChain& chain,
                                             const std::vector<double>& mu, double t) {
    const std::size_t m = chain.size();
    if (mu.size() != m)
        throw std::invalid_argument("evolve_continuous: distribution size mismatch");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("evolve_continuous: t must be finite and >= 0");
    if (t == 0.0) return mu;

    // 12 sigma past the Poisson mean leaves tail mass far below 1e-13.
    const int lmax = static_cast<int>(std::ceil(t + 12.0 * std::sqrt(t) + 30.0));
    std::vector<double> result(m, 0.0);
    std::vector<double> cur = mu;
    double weight_seen = 0.0;
    for (int l = 0; l <= lmax; ++l) {
        const double logw = -t + static_cast<double>(l) * std::log(t) -
                            std::lgamma(static_cast<double>(l) + 1.0);
        const double w = std::exp(logw);
        if (w > 0.0) {
            for (std::size_t j = 0; j < m; ++j)
                result[j] += w * cur[j];
            weight_seen += w;
        }
        if (weight_seen > 1.0 - 1e-14) break;
        cur = evolve(chain, std::move(cur), 1);
    }
    return result;
}

} // namespace bdspec

#endif // BDSPEC_ORACLE_HPP
