#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "ia/errors.hpp"
#include "ia/special_functions.hpp"

using ia::exp_integral;
using ia::exp_integral_quadrature;
using ia::exp_integral_scaled;
using ia::log_kernel_integral;
using ia::log_kernel_integral_quadrature;

TEST_CASE("E_2 tends to 1 as z -> 0+") {
    // E_2(0) = integral of x^-2 over [1, inf) = 1.
    CHECK(exp_integral(2, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(exp_integral(2, 1e-6) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("E_1(1) against tabulated value and quadrature") {
    const double e1 = exp_integral(1, 1.0);
    // Abramowitz & Stegun table 5.1 value.
    CHECK(e1 == doctest::Approx(0.2193839343955205).epsilon(1e-13));
    CHECK(e1 == doctest::Approx(exp_integral_quadrature(1, 1.0)).epsilon(1e-10));
}

TEST_CASE("closed form matches quadrature across orders and arguments") {
    for (int p : {1, 2, 3, 5, 8}) {
        for (double z : {0.05, 0.5, 1.0, 3.0, 20.0}) {
            CAPTURE(p);
            CAPTURE(z);
            const double closed = exp_integral(p, z);
            const double quad = exp_integral_quadrature(p, z);
            CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
        }
    }
}

TEST_CASE("recurrence p*E_{p+1}(z) = e^{-z} - z*E_p(z)") {
    for (int p = 1; p <= 10; ++p) {
        for (double z : {0.01, 1.0, 100.0}) {
            CAPTURE(p);
            CAPTURE(z);
            const double lhs = p * exp_integral(p + 1, z);
            const double rhs = std::exp(-z) - z * exp_integral(p, z);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("positivity and strict decrease in order and argument") {
    for (double z : {0.01, 0.3, 1.0, 5.0}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int p = 1; p <= 6; ++p) {
            const double v = exp_integral(p, z);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
    for (int p : {1, 2, 4}) {
        CHECK(exp_integral(p, 2.0) < exp_integral(p, 1.0));
        CHECK(exp_integral(p, 1.0) < exp_integral(p, 0.5));
    }
}

TEST_CASE("scaled variant agrees with e^z E_p(z) and survives large z") {
    for (int p : {1, 3, 6}) {
        for (double z : {0.1, 1.0, 30.0}) {
            const double direct = std::exp(z) * exp_integral(p, z);
            CHECK(exp_integral_scaled(p, z) == doctest::Approx(direct).epsilon(1e-12));
        }
    }
    // e^z E_1(z) is bracketed by 1/(z+1) and 1/z; at z=800 the unscaled value
    // underflows but the scaled one must stay meaningful.
    const double s = exp_integral_scaled(1, 800.0);
    CHECK(s > 1.0 / 801.0);
    CHECK(s < 1.0 / 800.0);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(exp_integral(1, 0.0), ia::DomainError);
    CHECK_THROWS_AS(exp_integral(1, -1.0), ia::DomainError);
    CHECK_THROWS_AS(exp_integral(0, 1.0), ia::DomainError);
}

TEST_CASE("log-kernel integral matches adaptive quadrature") {
    // Covers the (a, mu) ranges that desk-scale C_SU evaluations produce:
    // powers up to ~8 and mu spanning 30 dB around unity.
    for (int a : {0, 1, 2, 3, 5, 8}) {
        for (double mu : {0.001, 0.0316, 0.1, 1.0, 3.16, 10.0, 100.0}) {
            CAPTURE(a);
            CAPTURE(mu);
            const double closed = log_kernel_integral(a, mu);
            const double quad = log_kernel_integral_quadrature(a, mu);
            CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
        }
    }
}

TEST_CASE("log-kernel integral basic properties") {
    // Integrand x^a e^{-mu x} ln(1+x) is positive, so the integral is too,
    // and it decreases when mu grows.
    for (int a : {0, 2, 4}) {
        CHECK(log_kernel_integral(a, 1.0) > 0.0);
        CHECK(log_kernel_integral(a, 2.0) < log_kernel_integral(a, 1.0));
    }
    // a = 0, mu = 1: integral equals e * E_1(1) by the standard reduction.
    CHECK(log_kernel_integral(0, 1.0)
          == doctest::Approx(std::exp(1.0) * exp_integral(1, 1.0)).epsilon(1e-12));
}
