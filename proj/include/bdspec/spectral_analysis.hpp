// SPDX-License-Identifier: Apache-2.0
//
// Post-spectrum diagnostics: normalized eigenvectors with a residual check,
// the beta fixed points of the Rayleigh map (roots of pi(xi) - xi(n)), the
// curvature signs D_i, the partial-fraction representation of the map, the
// boundary product identity, and the separation-distance formulas for
// birth-death chains.

#ifndef BDSPEC_SPECTRAL_ANALYSIS_HPP
#define BDSPEC_SPECTRAL_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdspec/birth_death.hpp"
#include "bdspec/errors.hpp"
#include "bdspec/estimates.hpp"
#include "bdspec/oracle.hpp"
#include "bdspec/shooting.hpp"
#include "bdspec/solvers.hpp"
#include "bdspec/weighted_path.hpp"

namespace bdspec {

/// L2(pi)-normalized eigenvector; index 0 is the constant vector.  For
/// index >= 1 the sign is fixed by values[0] < 0 and the vector has exactly
/// `index` sign changes.
struct Eigenvector {
    int index = 0;
    std::vector<double> values;
    double residual = 0.0; // max row residual relative to lambda * max pi|zeta|
};

/// Build the eigenvector at a converged eigenvalue estimate by forward
/// shooting and L2(pi) normalization.  Rejects estimates whose row residual
/// exceeds 1e-6 of the natural row scale.
inline Eigenvector eigenvector(const WeightedPath& path, int index, double lambda) {
    const std::size_t n = path.size();
    if (index < 0 || static_cast<std::size_t>(index) >= n)
        throw std::invalid_argument("eigenvector: index must be in 0..n-1");
    Eigenvector out;
    out.index = index;
    if (index == 0) {
        out.values.assign(n, 1.0);
        return out;
    }

    const ShootingProfile profile = shoot(path, lambda);
    out.values = profile.values;
    // the profile's pi-mean is exactly its contamination by the constant
    // eigenvector; project it out before normalizing
    const double mean = pi_mean(path, out.values);
    for (double& v : out.values) v -= mean;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        norm2 += path.pi[k] * out.values[k] * out.values[k];
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : out.values) v *= inv;

    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        scale = std::max(scale, path.pi[k] * std::abs(out.values[k]));
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double row = 0.0;
        if (k > 0) row += (out.values[k] - out.values[k - 1]) * path.nu[k - 1];
        if (k + 1 < n) row += (out.values[k] - out.values[k + 1]) * path.nu[k];
        worst = std::max(worst, std::abs(lambda * path.pi[k] * out.values[k] - row));
    }
    out.residual = worst / (lambda * scale);
    if (!(out.residual <= 1e-6))
        throw numeric_error("eigenvector: residual " + std::to_string(out.residual) +
                            " too large; eigenvalue estimate too loose");
    return out;
}

/// Roots beta_1 < ... < beta_{n-2} of pi(xi_lambda) - xi_lambda(n) = 0, one
/// in each window (lambda_i, lambda_{i+1}).  The sign of u alternates with
/// the parity of i at the eigenvalues, which drives the bisection.
inline std::vector<double> beta_roots(const WeightedPath& path, const Spectrum& spectrum) {
    const std::size_t n = path.size();
    if (spectrum.size() != n)
        throw std::invalid_argument("beta_roots: spectrum size mismatch");
    std::vector<double> betas;
    if (n < 3) return betas;
    betas.reserve(n - 2);

    const auto u_sign = [&](double lambda) {
        const ShootingProfile p = shoot(path, lambda);
        const double u = p.pi_mean - p.boundary_value;
        return u > 0.0 ? 1 : (u < 0.0 ? -1 : 0);
    };

    const auto bracket_width = [&](std::size_t i) {
        if (spectrum.estimates.size() < i) return 0.0;
        const EigenEstimate& est = spectrum.estimates[i - 1];
        return est.upper - est.lower;
    };

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double li = spectrum.eigenvalues[i];
        const double ri = spectrum.eigenvalues[i + 1];
        // the margins cannot shrink below the eigenvalue uncertainty
        const double floor_l =
            std::max(4.0 * bracket_width(i), 8.0 * std::numeric_limits<double>::epsilon() * li);
        const double floor_r = std::max(4.0 * bracket_width(i + 1),
                                        8.0 * std::numeric_limits<double>::epsilon() * ri);
        double dl = std::max(1e-9 * (ri - li), floor_l);
        double dr = std::max(1e-9 * (ri - li), floor_r);
        if (!(li + dl < ri - dr))
            throw numeric_error("beta_roots: window " + std::to_string(i) +
                                " narrower than the eigenvalue uncertainty");
        const int want_left = (i % 2 == 1) ? -1 : 1; // u(lambda_i) < 0 for odd i

        // near-degenerate lambda_i ~ alpha_i can pin the root inside the
        // margin; shrink it toward the uncertainty floor before giving up
        while (u_sign(li + dl) != want_left && dl > floor_l)
            dl = std::max(dl / 16.0, floor_l);
        while (u_sign(ri - dr) != -want_left && dr > floor_r)
            dr = std::max(dr / 16.0, floor_r);

        const bool left_ok = u_sign(li + dl) == want_left;
        const bool right_ok = u_sign(ri - dr) == -want_left;
        if (!left_ok && !right_ok)
            throw numeric_error("beta_roots: endpoint signs inconsistent in window " +
                                std::to_string(i) + "; spectrum not converged");
        if (!left_ok) { // root within the left uncertainty margin
            betas.push_back(li + 0.5 * dl);
            continue;
        }
        if (!right_ok) {
            betas.push_back(ri - 0.5 * dr);
            continue;
        }
        // bisect to floating-point resolution (a few iterations past the
        // 1e-12 lambda_{i+1} contract; the partial-fraction consumers are
        // limited by this accuracy)
        double lo = li + dl, hi = ri - dr;
        for (;;) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (u_sign(mid) == want_left)
                lo = mid;
            else
                hi = mid;
        }
        betas.push_back(0.5 * (lo + hi));
    }
    return betas;
}

/// D_i = sum_j (beta_j - lambda_i)^{-1} - sum_{j != i} (lambda_j - lambda_i)^{-1},
/// half the second derivative of the Rayleigh map at the i-th eigenvalue.
inline std::vector<double> curvature(const Spectrum& spectrum,
                                     const std::vector<double>& betas) {
    const std::size_t n = spectrum.size();
    if (betas.size() + 2 != n)
        throw std::invalid_argument("curvature: need n-2 beta roots");
    std::vector<double> d(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double li = spectrum.eigenvalues[i];
        double acc = 0.0;
        for (const double b : betas) {
            if (b == li) throw numeric_error("curvature: beta coincides with an eigenvalue");
            acc += 1.0 / (b - li);
        }
        for (std::size_t j = 1; j < n; ++j) {
            if (j == i) continue;
            acc -= 1.0 / (spectrum.eigenvalues[j] - li);
        }
        d[i - 1] = acc;
    }
    return d;
}

namespace detail {

inline void check_pole_margin(double lambda, double pole, const char* what) {
    if (std::abs(lambda - pole) < 1e-9 * std::max(std::abs(lambda), std::abs(pole)))
        throw numeric_error(std::string(what) + ": lambda too close to " +
                            std::to_string(pole));
}

} // namespace detail

/// The Rayleigh map L(lambda) through its partial-fraction representation
/// 1/(L - lambda) = sum_j 1/(lambda_j - lambda) - sum_j 1/(beta_j - lambda).
inline double l_spectral(const Spectrum& spectrum, const std::vector<double>& betas,
                         double lambda) {
    const std::size_t n = spectrum.size();
    if (betas.size() + 2 != n)
        throw std::invalid_argument("l_spectral: need n-2 beta roots");
    if (!(lambda > 0.0))
        throw std::invalid_argument("l_spectral: lambda must be positive");
    double s = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        detail::check_pole_margin(lambda, spectrum.eigenvalues[j], "l_spectral");
        s += 1.0 / (spectrum.eigenvalues[j] - lambda);
    }
    for (const double b : betas) {
        detail::check_pole_margin(lambda, b, "l_spectral");
        s -= 1.0 / (b - lambda);
    }
    return lambda + 1.0 / s;
}

/// Expansion coefficient rho_i(lambda) of xi_lambda over the eigenvectors:
/// rho_0 from the product formula, rho_i = lambda zeta_i(n)/(lambda - lambda_i) rho_0.
/// boundary_values[i] must hold zeta_i(n) for i >= 1 (entry 0 is unused).
inline double rho_coefficient(const Spectrum& spectrum,
                              const std::vector<double>& boundary_values, double lambda,
                              int index) {
    const std::size_t n = spectrum.size();
    if (index < 0 || static_cast<std::size_t>(index) >= n)
        throw std::invalid_argument("rho_coefficient: index out of range");
    if (boundary_values.size() != n)
        throw std::invalid_argument("rho_coefficient: need n boundary values");
    double rho0 = -1.0;
    for (std::size_t j = 1; j < n; ++j)
        rho0 *= (spectrum.eigenvalues[j] - lambda) / spectrum.eigenvalues[j];
    if (index == 0) return rho0;
    const double li = spectrum.eigenvalues[static_cast<std::size_t>(index)];
    detail::check_pole_margin(lambda, li, "rho_coefficient");
    return lambda * boundary_values[static_cast<std::size_t>(index)] / (lambda - li) * rho0;
}

/// zeta_i(1) zeta_i(n) = -prod_{j != i} lambda_j / (lambda_j - lambda_i).
inline double boundary_product(const Spectrum& spectrum, int index) {
    const std::size_t n = spectrum.size();
    if (index < 1 || static_cast<std::size_t>(index) >= n)
        throw std::invalid_argument("boundary_product: index must be in 1..n-1");
    const double li = spectrum.eigenvalues[static_cast<std::size_t>(index)];
    double prod = -1.0;
    for (std::size_t j = 1; j < n; ++j) {
        if (j == static_cast<std::size_t>(index)) continue;
        prod *= spectrum.eigenvalues[j] / (spectrum.eigenvalues[j] - li);
    }
    return prod;
}

enum class SepMode { discrete, continuous };

/// Separation distance from an endpoint at time m (discrete) or t
/// (continuous):
///   d = sum_{j>=1} (prod_{i != j} lambda_i/(lambda_i - lambda_j)) f(lambda_j)
/// with f = (1-lambda)^m or e^{-lambda t}, lambda_j the eigenvalues of I - K.
/// The discrete formula requires p_i + q_{i+1} <= 1 for all i.
inline double separation(const BirthDeathChain& chain, SepMode mode, double time,
                         Tolerance tol = {}) {
    const std::size_t m = chain.size();
    if (!chain.irreducible())
        throw std::invalid_argument("separation: chain is not irreducible");
    if (mode == SepMode::discrete) {
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (chain.p[i] + chain.q[i + 1] > 1.0 + kProbabilitySumTol)
                throw std::invalid_argument(
                    "separation: discrete formula needs p_i + q_{i+1} <= 1 (fails at i = " +
                    std::to_string(i) + ")");
        if (!(time >= 0.0) || time != std::floor(time))
            throw std::invalid_argument("separation: discrete time must be an integer >= 0");
    } else if (!(time >= 0.0)) {
        throw std::invalid_argument("separation: time must be >= 0");
    }

    const Spectrum sp = full_spectrum(from_birth_death(chain), tol);
    double d = 0.0;
    for (std::size_t j = 1; j < m; ++j) {
        const double lj = sp.eigenvalues[j];
        double coef = 1.0;
        for (std::size_t i = 1; i < m; ++i) {
            if (i == j) continue;
            coef *= sp.eigenvalues[i] / (sp.eigenvalues[i] - lj);
        }
        const double factor = mode == SepMode::discrete
                                  ? std::pow(1.0 - lj, time)
                                  : std::exp(-lj * time);
        d += coef * factor;
    }
    return d;
}

/// Check the likelihood-ratio monotonicity mu K^m(i)/pi(i) <=
/// mu K^m(i+1)/pi(i+1) at every step m = 0..horizon.  Requires the same
/// discrete hypothesis p_i + q_{i+1} <= 1 as the separation formula.
inline bool separation_monotone_check(const BirthDeathChain& chain,
                                      const std::vector<double>& mu, int horizon) {
    const std::size_t m = chain.size();
    if (mu.size() != m)
        throw std::invalid_argument("separation_monotone_check: distribution size mismatch");
    for (std::size_t i = 0; i + 1 < m; ++i)
        if (chain.p[i] + chain.q[i + 1] > 1.0 + kProbabilitySumTol)
            throw std::invalid_argument(
                "separation_monotone_check: needs p_i + q_{i+1} <= 1");
    const WeightedPath path = from_birth_death(chain);
    std::vector<double> current = mu;
    for (int step = 0; step <= horizon; ++step) {
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double left = current[i] / path.pi[i];
            const double right = current[i + 1] / path.pi[i + 1];
            if (left > right + 1e-12 * std::max(left, 1.0))
                return false;
        }
        current = evolve(chain, std::move(current), 1);
    }
    return true;
}

/// Bundled diagnostics: the spectrum, the eigenvalues of the leading
/// principal subpath (alphas), the beta roots, and the curvature signs,
/// with the interlacing lambda_i < alpha_i < beta_i < lambda_{i+1} verified.
struct AnalysisReport {
    Spectrum spectrum;
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> curvature;
};

inline AnalysisReport analyze(const WeightedPath& path, Tolerance tol = {}) {
    const std::size_t n = path.size();
    AnalysisReport report;
    report.spectrum = full_spectrum(path, tol);
    if (n >= 3) {
        const Spectrum sub = full_spectrum(principal_subpath(path, n - 1), tol);
        report.alphas.assign(sub.eigenvalues.begin() + 1, sub.eigenvalues.end());
        report.betas = beta_roots(path, report.spectrum);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            // allow ties at the eigenvalue-estimate resolution: nearly
            // degenerate paths can collapse lambda_i, alpha_i, beta_i
            const double unc = 1e-9 * report.spectrum.eigenvalues[i + 1];
            const bool ok =
                report.spectrum.eigenvalues[i] < report.alphas[i - 1] + unc &&
                report.alphas[i - 1] < report.betas[i - 1] + unc &&
                report.betas[i - 1] < report.spectrum.eigenvalues[i + 1];
            if (!ok)
                throw numeric_error("analyze: interlacing violated at index " +
                                    std::to_string(i));
        }
    }
    report.curvature = curvature(report.spectrum, report.betas);
    return report;
}

} // namespace bdspec

#endif // BDSPEC_SPECTRAL_ANALYSIS_HPP
