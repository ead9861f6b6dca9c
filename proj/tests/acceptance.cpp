// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: end-to-end checks of the solver stack at pinned
// tolerances, one pass/fail line per criterion.  Returns the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bdspec/birth_death.hpp"
#include "bdspec/bounds.hpp"
#include "bdspec/chain_spec.hpp"
#include "bdspec/cli.hpp"
#include "bdspec/oracle.hpp"
#include "bdspec/shooting.hpp"
#include "bdspec/solvers.hpp"
#include "bdspec/spectral_analysis.hpp"
#include "support.hpp"

using namespace bdspec;

namespace {

int failures = 0;

void report(int id, const char* label, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id, label,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

double wall_seconds(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

// ---------------------------------------------------------------- criterion 1
void criterion_table1() {
    // published normalized products lambda * eta_-a(1,n) * eta_a(2,n+1)
    const std::size_t ns[5] = {10000, 20000, 30000, 40000, 50000};
    const double as[5] = {0.8, 0.9, 1.0, 1.1, 1.2};
    const double published[5][5] = {
        {0.5983, 0.5960, 0.5948, 0.5941, 0.5935},
        {0.5652, 0.5625, 0.5610, 0.5601, 0.5594},
        {0.5405, 0.5377, 0.5362, 0.5353, 0.5345},
        {0.5235, 0.5210, 0.5197, 0.5189, 0.5183},
        {0.5128, 0.5109, 0.5099, 0.5093, 0.5088},
    };

    std::ostringstream out, err;
    const char* argv[] = {"bdspec", "--jobs", "4", "table1"};
    const int code = cli::run_cli(4, argv, out, err);
    bool ok = code == 0;
    double worst = 0.0;
    if (ok) {
        std::istringstream rows(out.str());
        std::string line;
        std::getline(rows, line); // header
        while (std::getline(rows, line)) {
            std::size_t n;
            double a, product;
            std::sscanf(line.c_str(), "%zu,%lf,%lf", &n, &a, &product);
            int ai = -1, ni = -1;
            for (int k = 0; k < 5; ++k) {
                if (std::abs(a - as[k]) < 1e-9) ai = k;
                if (n == ns[k]) ni = k;
            }
            if (ai < 0 || ni < 0) {
                ok = false;
                continue;
            }
            worst = std::max(worst, std::abs(product - published[ai][ni]));
        }
        ok = ok && worst <= 5e-4;
    }
    report(1, "published normalized gap products reproduced to 5e-4", ok,
           "max deviation " + cli::format_double(worst));
}

// ---------------------------------------------------------------- criterion 2
void criterion_closed_forms() {
    double err_srw = 0.0, err_ehr = 0.0;
    const double t_srw = wall_seconds([&] {
        const Spectrum sp = full_spectrum(simple_random_walk(200));
        for (std::size_t j = 0; j < 200; ++j)
            err_srw = std::max(err_srw,
                               std::abs(sp.eigenvalues[j] - testsupport::srw_eigenvalue(200, j)));
    });
    const double t_ehr = wall_seconds([&] {
        const Spectrum sp = full_spectrum(from_birth_death(ehrenfest(100)));
        for (std::size_t j = 0; j <= 100; ++j)
            err_ehr = std::max(
                err_ehr, std::abs(sp.eigenvalues[j] - testsupport::ehrenfest_eigenvalue(100, j)));
    });
    const bool ok = err_srw < 1e-10 && err_ehr < 1e-10 && t_srw < 1.0 && t_ehr < 1.0;
    report(2, "closed-form spectra to 1e-10 within 1 s each", ok,
           "errors " + cli::format_double(err_srw) + ", " + cli::format_double(err_ehr) +
               "; times " + cli::format_double(t_srw) + " s, " + cli::format_double(t_ehr) +
               " s");
}

// ---------------------------------------------------------------- criterion 3
void criterion_oracle_equivalence() {
    testsupport::Rng rng(301);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = testsupport::random_size(rng, 2, 40);
        const auto path = testsupport::random_path(rng, n, 6.0);
        const Spectrum fast = full_spectrum(path);
        const Spectrum slow = oracle_spectrum(path);
        for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst, std::abs(fast.eigenvalues[j] - slow.eigenvalues[j]));
    }
    report(3, "shooting and Sturm spectra agree to 1e-10 on 200 random paths", worst <= 1e-10,
           "max deviation " + cli::format_double(worst));
}

// ---------------------------------------------------------------- criterion 4
void criterion_bracket_law() {
    testsupport::Rng rng(304);
    const double eps = std::numeric_limits<double>::epsilon();
    double worst_units = 0.0;
    long checked = 0;
    const auto verify = [&](const EigenEstimate& est, double l0, double u0) {
        for (std::size_t l = 0; l < est.history.size(); ++l) {
            const double width = est.history[l].upper - est.history[l].lower;
            const double expected = std::ldexp(u0 - l0, -static_cast<int>(l));
            worst_units = std::max(worst_units, std::abs(width - expected) / (eps * u0));
            ++checked;
        }
    };
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = testsupport::random_size(rng, 3, 20);
        const auto path = testsupport::random_path(rng, n);
        const auto [l0, u0] = default_bracket(path);
        verify(solve_gap_a2(path, l0, u0, {}, true), l0, u0);
        for (std::size_t i = 1; i < n; ++i)
            verify(solve_eigen_di(path, static_cast<int>(i), l0, u0, {}, true), l0, u0);
    }
    {
        const WeightedPath path = simple_random_walk(50);
        const auto [l0, u0] = default_bracket(path);
        for (int i = 1; i < 50; ++i)
            verify(solve_eigen_di(path, i, l0, u0, {}, true), l0, u0);
    }
    // one rounding unit at the bracket scale, with a small safety multiple
    report(4, "dichotomy widths halve exactly (within rounding) at every step",
           worst_units <= 4.0 && checked > 10000,
           "worst " + cli::format_double(worst_units) + " ulp over " +
               std::to_string(checked) + " iterations");
}

// ---------------------------------------------------------------- criterion 5
void criterion_a1_monotone() {
    testsupport::Rng rng(305);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = testsupport::random_size(rng, 3, 25);
        const auto path = testsupport::random_path(rng, n, 2.0);
        const double gap = oracle_spectrum(path).eigenvalues[1];
        const double lambda0 = gap * (1.0 + testsupport::log_uniform(rng, -2, 1));
        const EigenEstimate est = solve_gap_a1(path, lambda0);
        for (std::size_t k = 1; k + 1 < est.history.size(); ++k) {
            const double cur = est.history[k].lambda;
            const double next = est.history[k + 1].lambda;
            if (k + 2 == est.history.size()) {
                if (!(std::abs(next - cur) <= 1e-12 * cur)) ok = false; // stop step
            } else if (!(cur > next)) {
                ok = false;
            }
        }
        worst = std::max(worst, std::abs(est.estimate - gap));
    }
    report(5, "fixed-point iterates decrease strictly and land within 1e-9 of the gap",
           ok && worst <= 1e-9, "max gap deviation " + cli::format_double(worst));
}

// ---------------------------------------------------------------- criterion 6
void criterion_lower_bound() {
    testsupport::Rng rng(306);
    bool ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = testsupport::random_size(rng, 2, 60);
        const auto path = testsupport::random_path(rng, n, 6.0);
        const double c = gap_lower_bound(path);
        const double cp = gap_lower_bound_cprime(path);
        const double gap = oracle_spectrum(path).eigenvalues[1];
        if (!(c <= gap * (1.0 + 1e-12))) ok = false;
        if (!(cp <= c * (1.0 + 1e-12) && c <= 2.0 * cp * (1.0 + 1e-12))) ok = false;
    }
    report(6, "hitting-sum lower bound below the gap, sandwiched by its summed variant", ok);
}

// ---------------------------------------------------------------- criterion 7
void criterion_bracket_containment() {
    testsupport::Rng rng(307);
    bool ok = true;
    const auto contains = [&](const GapBracket& bound, const EigenEstimate& est) {
        return bound.lower <= est.upper * (1.0 + 4e-15) &&
               est.lower * (1.0 - 4e-15) <= bound.upper;
    };
    const auto gap_estimate = [&](const WeightedPath& path) {
        const auto [l0, u0] = default_bracket(path);
        return solve_gap_a2(path, l0, u0, {}, false);
    };
    for (const std::size_t n : {1ul, 2ul, 5ul, 17ul, 60ul, 200ul, 1000ul, 2000ul}) {
        for (const double a : {0.25, 0.8, 1.0, 1.2, 3.0, 8.0}) {
            if (!contains(metropolis_gap_bounds(n, a, MetropolisVariant::check),
                          gap_estimate(from_birth_death(metropolis_check(n, a)))))
                ok = false;
            if (!contains(metropolis_gap_bounds(n, a, MetropolisVariant::hat),
                          gap_estimate(from_birth_death(metropolis_hat(n, a)))))
                ok = false;
        }
    }
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = testsupport::random_size(rng, 2, 2000);
        const std::size_t k = testsupport::random_size(rng, 1, std::min<std::size_t>(n, 6));
        std::vector<std::size_t> positions;
        std::vector<double> epsilons;
        std::size_t prev = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t lo = prev + 1;
            const std::size_t hi = n - (k - 1 - j);
            if (lo > hi) break;
            prev = testsupport::random_size(rng, lo, hi);
            positions.push_back(prev);
            epsilons.push_back(testsupport::log_uniform(rng, -6, 1));
        }
        const GapBracket bound = bottleneck_bounds(n, positions, epsilons);
        if (!(bound.lower > 0.0)) ok = false;
        if (!contains(bound, gap_estimate(bottleneck_path(n, positions, epsilons)))) ok = false;
    }
    report(7, "Metropolis and bottleneck brackets contain the computed gap", ok);
}

// ---------------------------------------------------------------- criterion 8
void criterion_separation() {
    testsupport::Rng rng(308);
    bool ok = true;
    double worst_d = 0.0, worst_c = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t m = testsupport::random_size(rng, 3, 12);
        const auto chain = testsupport::random_monotone_chain(rng, m);
        const WeightedPath path = from_birth_death(chain);
        const Spectrum sp = full_spectrum(path);
        std::vector<double> mu(m, 0.0);
        mu[0] = 1.0;
        std::vector<double> evolved = mu;
        for (int steps = 0; steps <= 200; ++steps) {
            double formula = 0.0;
            for (std::size_t j = 1; j < m; ++j) {
                double coef = 1.0;
                for (std::size_t i = 1; i < m; ++i)
                    if (i != j)
                        coef *= sp.eigenvalues[i] / (sp.eigenvalues[i] - sp.eigenvalues[j]);
                formula += coef * std::pow(1.0 - sp.eigenvalues[j], steps);
            }
            const double direct = 1.0 - evolved[m - 1] / path.pi[m - 1];
            worst_d = std::max(worst_d, std::abs(formula - direct));
            evolved = evolve(chain, std::move(evolved), 1);
        }
        for (const double t : {0.1, 1.0, 10.0}) {
            const auto h = evolve_continuous(chain, mu, t);
            const double direct = 1.0 - h[m - 1] / path.pi[m - 1];
            worst_c = std::max(
                worst_c, std::abs(separation(chain, SepMode::continuous, t) - direct));
        }
    }
    if (worst_d > 1e-10 || worst_c > 1e-9) ok = false;

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = testsupport::random_size(rng, 3, 10);
        const auto chain = testsupport::random_monotone_chain(rng, m);
        const WeightedPath path = from_birth_death(chain);
        std::vector<double> mu(m);
        double ratio = 0.3;
        for (std::size_t i = 0; i < m; ++i) {
            mu[i] = path.pi[i] * ratio;
            ratio += testsupport::log_uniform(rng, -3, 0);
        }
        detail::normalize_in_place(mu);
        if (!separation_monotone_check(chain, mu, 50)) ok = false;
    }
    report(8, "separation formulas match dense evolution; likelihood ratios stay monotone",
           ok,
           "discrete dev " + cli::format_double(worst_d) + ", continuous dev " +
               cli::format_double(worst_c));
}

// ---------------------------------------------------------------- criterion 9
void criterion_structure() {
    testsupport::Rng rng(309);
    bool type_jumps = true, interlacing = true, products = true, sign_pattern = true,
         sign_changes_monotone = true;

    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = testsupport::random_size(rng, 4, 25);
        const auto path = testsupport::random_path(rng, n, 2.5);

        // type of the profile jumps exactly at the truncated-path eigenvalues
        const Spectrum alphas = oracle_spectrum(principal_subpath(path, n - 1), {0.0, 0.0});
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double alpha = alphas.eigenvalues[j];
            const double delta = 1e-8 * alpha;
            if (shoot(path, alpha - delta).type_index != static_cast<int>(j))
                type_jumps = false;
            if (shoot(path, alpha + delta).type_index != static_cast<int>(j) + 1)
                type_jumps = false;
        }

        // interlacing lambda_i < alpha_i < beta_i < lambda_{i+1}
        const Spectrum sp = full_spectrum(path, {0.0, 0.0});
        const auto betas = beta_roots(path, sp);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (!(sp.eigenvalues[i] < alphas.eigenvalues[i] * (1.0 + 1e-12)))
                interlacing = false;
            if (!(alphas.eigenvalues[i] < betas[i - 1] * (1.0 + 1e-12))) interlacing = false;
            if (!(betas[i - 1] < sp.eigenvalues[i + 1])) interlacing = false;
        }

        // sign of L(lambda) - lambda flips exactly at the beta fixed points
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double li = sp.eigenvalues[i], ri = sp.eigenvalues[i + 1];
            const double beta = betas[i - 1];
            for (const double f : {0.15, 0.5, 0.85}) {
                const double below = li + (beta - li) * f;
                const double above = beta + (ri - beta) * f;
                if (below > li * (1.0 + 1e-9) && beta > below * (1.0 + 1e-9)) {
                    const ShootingProfile p = shoot(path, below);
                    if (!(rayleigh_quotient(path, p.values) < below)) sign_pattern = false;
                }
                if (above > beta * (1.0 + 1e-9) && ri > above * (1.0 + 1e-9)) {
                    const ShootingProfile p = shoot(path, above);
                    if (!(rayleigh_quotient(path, p.values) > above)) sign_pattern = false;
                }
            }
        }

        // sign-change positions move left as lambda increases
        for (int rep = 0; rep < 8; ++rep) {
            const double l1 = testsupport::log_uniform(rng, -4, 0);
            const double l2 = l1 * (1.0 + testsupport::log_uniform(rng, -2, 1));
            const auto s1 = sign_change_positions(shoot(path, l1).values);
            const auto s2 = sign_change_positions(shoot(path, l2).values);
            for (std::size_t k = 0; k < s1.size(); ++k)
                if (s1[k] < s2[k]) sign_changes_monotone = false;
        }
    }

    // boundary product identity on a corpus where the shot eigenvector
    // resolves both endpoints
    {
        testsupport::Rng rng2(310);
        for (int trial = 0; trial < 12; ++trial) {
            const std::size_t n = testsupport::random_size(rng2, 3, 25);
            const auto path = testsupport::random_path(rng2, n, 0.5);
            const Spectrum sp = full_spectrum(path, {0.0, 0.0});
            for (std::size_t i = 1; i < n; ++i) {
                const Eigenvector z =
                    eigenvector(path, static_cast<int>(i), sp.eigenvalues[i]);
                const double direct = z.values.front() * z.values.back();
                const double formula = boundary_product(sp, static_cast<int>(i));
                double zmax = 0.0;
                for (const double v : z.values) zmax = std::max(zmax, std::abs(v));
                const double scale =
                    std::abs(formula) +
                    zmax * (std::abs(z.values.front()) + std::abs(z.values.back()));
                // the direct product inherits the eigenvector's residual
                const double tol = std::max(1e-8, 8.0 * z.residual);
                if (!(std::abs(formula - direct) <= tol * scale)) products = false;
            }
        }
    }

    const bool ok =
        type_jumps && interlacing && products && sign_pattern && sign_changes_monotone;
    std::string detail;
    if (!ok) {
        detail = std::string("type_jumps=") + (type_jumps ? "ok" : "FAIL") +
                 " interlacing=" + (interlacing ? "ok" : "FAIL") +
                 " products=" + (products ? "ok" : "FAIL") +
                 " sign_pattern=" + (sign_pattern ? "ok" : "FAIL") +
                 " sign_changes=" + (sign_changes_monotone ? "ok" : "FAIL");
    }
    report(9, "shape, interlacing, product and sign-change structure theorems", ok, detail);
}

// --------------------------------------------------------------- criterion 10
void criterion_scaling() {
    const auto time_spectrum = [&](std::size_t n) {
        const WeightedPath path = simple_random_walk(n);
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < 3; ++rep)
            best = std::min(best, wall_seconds([&] { full_spectrum(path, {}, 1); }));
        return best;
    };
    const double t500 = time_spectrum(500);
    const double t1000 = time_spectrum(1000);
    const double t2000 = time_spectrum(2000);
    const double r1 = t1000 / t500;
    const double r2 = t2000 / t1000;
    const bool ok = r1 >= 2.5 && r1 <= 6.0 && r2 >= 2.5 && r2 <= 6.0;
    report(10, "full-spectrum wall time scales quadratically", ok,
           "T(1000)/T(500) = " + cli::format_double(r1) +
               ", T(2000)/T(1000) = " + cli::format_double(r2));
}

} // namespace

int main() {
    criterion_table1();
    criterion_closed_forms();
    criterion_oracle_equivalence();
    criterion_bracket_law();
    criterion_a1_monotone();
    criterion_lower_bound();
    criterion_bracket_containment();
    criterion_separation();
    criterion_structure();
    criterion_scaling();
    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria failed\n", failures);
    return failures;
}
