// SPDX-License-Identifier: Apache-2.0

#ifndef BDSPEC_ESTIMATES_HPP
#define BDSPEC_ESTIMATES_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "bdspec/errors.hpp"
#include "bdspec/weighted_path.hpp"

namespace bdspec {

/// Bisection stopping rule: a bracket [L, U] is converged once
/// U - L <= max(abs, rel * U).
struct Tolerance {
    double abs = 1e-14;
    double rel = 1e-12;

    double threshold(double scale) const { return std::max(abs, rel * scale); }
};

struct IterationRecord {
    double lambda; // trial value evaluated this iteration
    double lower;  // bracket when the trial was formed
    double upper;
};

/// A certified bracket around one eigenvalue plus iteration metadata.
struct EigenEstimate {
    int index = 1; // eigenvalue rank among the nonzero eigenvalues, 1-based
    double lower = 0.0;
    double upper = 0.0;
    double estimate = 0.0;
    int iterations = 0;
    bool exact_hit = false; // a trial value tested as an exact eigenvalue
    std::vector<IterationRecord> history;
};

/// Sorted eigenvalues 0 = lambda_0 < lambda_1 < ... < lambda_{n-1}.
/// estimates[i-1] carries the bracket for lambda_i.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<EigenEstimate> estimates;

    std::size_t size() const { return eigenvalues.size(); }

    /// The true eigenvalues are strictly increasing; the estimates may tie
    /// or invert within their certified bracket widths when a pair is closer
    /// than the solve tolerance.  Anything beyond that is a solver failure.
    void check_strictly_sorted() const {
        for (std::size_t i = 1; i < eigenvalues.size(); ++i) {
            double slack = 0.0;
            if (estimates.size() + 1 == eigenvalues.size()) {
                slack += estimates[i - 1].upper - estimates[i - 1].lower;
                if (i >= 2) slack += estimates[i - 2].upper - estimates[i - 2].lower;
            }
            if (!(eigenvalues[i] > eigenvalues[i - 1] - slack))
                throw numeric_error("Spectrum: eigenvalue estimates out of order beyond "
                                    "their bracket widths");
        }
    }
};

/// Twice the largest diagonal entry of the generator; a Gershgorin bound,
/// so every eigenvalue is <= this value.
inline double gershgorin_bound(const WeightedPath& path) {
    const std::size_t n = path.size();
    double maxdiag = path.nu[0] / path.pi[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double left = path.nu[i - 1];
        const double right = i + 1 < n ? path.nu[i] : 0.0;
        maxdiag = std::max(maxdiag, (left + right) / path.pi[i]);
    }
    return 2.0 * maxdiag;
}

} // namespace bdspec

#endif // BDSPEC_ESTIMATES_HPP
