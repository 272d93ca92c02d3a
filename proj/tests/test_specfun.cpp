#include <doctest.h>

#include <cmath>
#include <random>

#include "latticebeam/error.hpp"
#include "latticebeam/specfun.hpp"
#include "oracles.hpp"
#include "specfun_suites.hpp"

using latticebeam::specfun::bessel_j;
using latticebeam::specfun::bessel_j_sequence;

TEST_CASE("oracle reproduces high-precision reference values") {
    // 40-digit references from an arbitrary-precision series summation
    CHECK(oracle::bessel_series(1, 1.0) == doctest::Approx(0.44005058574493351596).epsilon(1e-15));
    CHECK(oracle::bessel_series(0, 4.0 * M_PI) ==
          doctest::Approx(0.15750739248213843875).epsilon(1e-14));
    CHECK(oracle::first_j0_zero() == doctest::Approx(2.4048255576957727686).epsilon(1e-15));
}

TEST_CASE("bessel_j exact values at the origin") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(5, 0.0) == 0.0);
    CHECK(bessel_j(512, 0.0) == 0.0);
}

TEST_CASE("bessel_j reference points") {
    CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-12);
    CHECK(std::abs(bessel_j(0, oracle::first_j0_zero())) < 1e-12);
    CHECK(std::abs(bessel_j(1, 1.0) - 0.4400505857449335) < 1e-12);
    CHECK(std::abs(bessel_j(0, 4.0 * M_PI) - 0.15750739248213843875) < 1e-13);
}

TEST_CASE("bessel_j rejects bad arguments") {
    CHECK_THROWS_AS(bessel_j(0, -1e-3), latticebeam::DomainError);
    CHECK_THROWS_AS(bessel_j(0, std::nan("")), latticebeam::DomainError);
    CHECK_THROWS_AS(bessel_j(0, INFINITY), latticebeam::DomainError);
    CHECK_THROWS_AS(bessel_j(-1, 1.0), latticebeam::RangeError);
    CHECK_THROWS_AS(bessel_j(513, 1.0), latticebeam::RangeError);
    CHECK_THROWS_AS(bessel_j_sequence(600, 1.0), latticebeam::RangeError);
}

TEST_CASE("bessel_j_sequence basics") {
    const auto at_zero = bessel_j_sequence(2, 0.0);
    REQUIRE(at_zero.size() == 3);
    CHECK(at_zero[0] == 1.0);
    CHECK(at_zero[1] == 0.0);
    CHECK(at_zero[2] == 0.0);

    const double x = M_PI * 0.8 / 0.78;
    const auto seq = bessel_j_sequence(6, x);
    REQUIRE(seq.size() == 7);
    for (int i = 0; i <= 6; ++i) CHECK(std::abs(seq[i] - bessel_j(i, x)) <= 1e-14);

    const auto tail = bessel_j_sequence(300, 10.0);
    REQUIRE(tail.size() == 301);
    // |J_n(x)| <= (x/2)^n / n! for x >= 0; J_n(10) itself drops below 1e-100 at n = 109
    double bound = 1.0;
    for (int n = 1; n <= 300; ++n) {
        bound *= 5.0 / n;
        if (n >= 60) CHECK(std::abs(tail[n]) <= bound);
        if (n >= 109) CHECK(std::abs(tail[n]) < 1e-100);
    }
    CHECK(tail[60] == doctest::Approx(oracle::bessel_series(60, 10.0)).epsilon(1e-12));
}

TEST_CASE("sequence agrees with single evaluations on both algorithm branches") {
    for (double x : {0.3, 1.99, 2.0, 7.5, 40.0, 333.3}) {
        const auto seq = bessel_j_sequence(80, x);
        for (int n = 0; n <= 80; ++n) CHECK(std::abs(seq[n] - bessel_j(n, x)) <= 1e-14);
    }
}

TEST_CASE("three-term recurrence holds on random points") {
    CHECK(suites::recurrence_worst() < 1e-10);
}

TEST_CASE("even-order normalisation sum equals one") {
    CHECK(suites::normalisation_worst() < 1e-10);
}

TEST_CASE("values are bounded by one") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> xs(0.0, 500.0);
    for (int trial = 0; trial < 200; ++trial) {
        for (double v : bessel_j_sequence(512, xs(rng))) CHECK(std::abs(v) <= 1.0);
    }
}

TEST_CASE("agreement with the power-series oracle on a random grid") {
    const double worst = suites::oracle_worst();
    MESSAGE("worst |J - oracle| = " << worst);
    CHECK(worst < 1e-12);
}
