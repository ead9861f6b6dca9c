// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bdspec/oracle.hpp"
#include "support.hpp"

using namespace bdspec;
using Catch::Approx;

TEST_CASE("sturm_count on the 3-vertex uniform path") {
    const WeightedPath path = simple_random_walk(3); // eigenvalues 0, 1/2, 3/2
    REQUIRE(sturm_count(path, 0.7) == 2);
    REQUIRE(sturm_count(path, -1.0) == 0);
    REQUIRE(sturm_count(path, 0.0) == 0);
    REQUIRE(sturm_count(path, gershgorin_bound(path) * 1.01) == 3);
}

TEST_CASE("sturm_count is a step function increasing by n in total") {
    testsupport::Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = testsupport::random_size(rng, 2, 30);
        const auto path = testsupport::random_path(rng, n);
        const double hi = gershgorin_bound(path);
        int prev = 0;
        for (int g = 0; g <= 64; ++g) {
            const int cnt = sturm_count(path, 1e-9 + hi * g / 64.0);
            REQUIRE(cnt >= prev);
            prev = cnt;
        }
        REQUIRE(sturm_count(path, hi * 1.000001) == static_cast<int>(n));
    }
}

TEST_CASE("oracle spectrum matches the closed forms") {
    SECTION("uniform path") {
        const Spectrum sp = oracle_spectrum(simple_random_walk(20));
        for (std::size_t j = 0; j < 20; ++j)
            REQUIRE(sp.eigenvalues[j] ==
                    Approx(testsupport::srw_eigenvalue(20, j)).margin(1e-12));
    }
    SECTION("Ehrenfest chain") {
        const Spectrum sp = oracle_spectrum(from_birth_death(ehrenfest(10)));
        for (std::size_t j = 0; j <= 10; ++j)
            REQUIRE(sp.eigenvalues[j] ==
                    Approx(testsupport::ehrenfest_eigenvalue(10, j)).margin(1e-12));
    }
}

TEST_CASE("oracle spectrum brackets are ordered and disjoint") {
    testsupport::Rng rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const auto path = testsupport::random_path(rng, testsupport::random_size(rng, 3, 25), 3.0);
        const Spectrum sp = oracle_spectrum(path);
        for (std::size_t i = 1; i < sp.estimates.size(); ++i) {
            REQUIRE(sp.estimates[i - 1].upper <= sp.estimates[i].lower);
        }
    }
}

TEST_CASE("det_a recursion matches small determinants") {
    // For the 3-vertex uniform path, det A_1(lambda) = a_1 = 2 - 2 lambda.
    const WeightedPath path = simple_random_walk(3);
    REQUIRE(det_a(path, 0.25, 1).to_double() == Approx(1.5).epsilon(1e-14));
    // det A_2 = a_1 a_2 - pi(3)/pi(2); root structure checked against the
    // nonzero eigenvalues 1/2, 3/2 of the full generator.
    REQUIRE(det_a(path, 0.5, 2).to_double() == Approx(0.0).margin(1e-14));
    REQUIRE(det_a(path, 1.5, 2).to_double() == Approx(0.0).margin(1e-14));
    REQUIRE_THROWS_AS(det_a(path, 0.5, 3), std::invalid_argument);
}

TEST_CASE("evolve basics") {
    const BirthDeathChain chain = ehrenfest(4);
    const WeightedPath path = from_birth_death(chain);
    std::vector<double> delta0(5, 0.0);
    delta0[0] = 1.0;

    SECTION("zero steps returns the input") {
        REQUIRE(evolve(chain, delta0, 0) == delta0);
    }
    SECTION("stationarity") {
        const auto out = evolve(chain, path.pi, 50);
        for (std::size_t i = 0; i < 5; ++i)
            REQUIRE(out[i] == Approx(path.pi[i]).margin(1e-13));
    }
    SECTION("mass preservation") {
        auto mu = delta0;
        for (int s = 0; s < 100; ++s) {
            mu = evolve(chain, std::move(mu), 1);
            REQUIRE(detail::compensated_sum(mu) == Approx(1.0).margin(1e-13));
        }
    }
}

TEST_CASE("continuous evolution matches the two-state closed form") {
    // Ehrenfest n=2: 1 - mu H_t(2)/pi(2) = 2 e^{-t} - e^{-2t} from delta_0
    const BirthDeathChain chain = ehrenfest(2);
    const WeightedPath path = from_birth_death(chain);
    std::vector<double> delta0{1.0, 0.0, 0.0};
    for (const double t : {0.1, 1.0, 10.0}) {
        const auto mu = evolve_continuous(chain, delta0, t);
        const double sep = 1.0 - mu[2] / path.pi[2];
        REQUIRE(sep == Approx(2.0 * std::exp(-t) - std::exp(-2.0 * t)).margin(1e-12));
    }
    SECTION("t = 0 is the identity") {
        REQUIRE(evolve_continuous(chain, delta0, 0.0) == delta0);
    }
}
