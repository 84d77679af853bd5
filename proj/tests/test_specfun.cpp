#include "cellmimo/errors.hpp"
#include "cellmimo/specfun.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cellmimo;

TEST_SUITE("specfun")
{
    TEST_CASE("2F1 on the fixed-point parameter family")
    {
        for (double alpha : {2.5, 3.0, 4.0, 4.5, 5.0, 6.0, 8.0}) {
            const double a = 1.0 - 2.0 / alpha;
            for (double z : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.9000001, 0.95, 0.99, 0.995, 0.999}) {
                const double got = gauss_2f1(a, a, 1.0 + a, z);
                const double ref = oracle::hyp2f1(a, a, 1.0 + a, z);
                CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref));
            }
        }
    }

    TEST_CASE("2F1 at general parameters")
    {
        const double params[][3] = {{0.3, 0.7, 1.9}, {1.5, -0.5, 2.5}, {2.0, 3.0, 4.5}, {0.1, 0.1, 0.2}};
        for (const auto& p : params)
            for (double z : {0.05, 0.5, 0.85, 0.93, 0.98}) {
                const double ref = oracle::hyp2f1(p[0], p[1], p[2], z);
                CHECK(gauss_2f1(p[0], p[1], p[2], z) == doctest::Approx(ref).epsilon(1e-11));
            }
    }

    TEST_CASE("2F1 elementary closed forms")
    {
        for (double z : {0.2, 0.6, 0.95}) {
            // 2F1(1,1;2;z) = -log(1-z)/z
            CHECK(gauss_2f1(1, 1, 2, z) == doctest::Approx(-std::log1p(-z) / z).epsilon(1e-12));
            // 2F1(a,b;b;z) = (1-z)^{-a}
            CHECK(gauss_2f1(0.4, 1.3, 1.3, z) == doctest::Approx(std::pow(1 - z, -0.4)).epsilon(1e-12));
            // 2F1(1/2,1/2;3/2;z^2) = asin(z)/z
            const double x = std::sqrt(z);
            CHECK(gauss_2f1(0.5, 0.5, 1.5, z) == doctest::Approx(std::asin(x) / x).epsilon(1e-12));
        }
        // Terminating series.
        CHECK(gauss_2f1(-2, 3, 4, 0.97) == doctest::Approx(1 - 2 * 3 * 0.97 / 4 + 3.0 * 4 / (4 * 5) * 0.97 * 0.97).epsilon(1e-14));
    }

    TEST_CASE("2F1 is increasing towards Gauss's value at one")
    {
        const double a = 0.6;
        const double limit = gauss_2f1_at_one(a, a, 1 + a);
        CHECK(limit == doctest::Approx(std::tgamma(1 + a) * std::tgamma(1 - a) / std::tgamma(1.0)).epsilon(1e-13));
        double prev = 0.0;
        for (double z = 0.0; z < 1.0; z += 0.05) {
            const double v = gauss_2f1(a, a, 1 + a, z);
            CHECK(v > prev);
            CHECK(v < limit);
            prev = v;
        }
    }

    TEST_CASE("2F1 with the complement supplied directly")
    {
        const double a = 0.6;
        const double limit = gauss_2f1_at_one(a, a, 1 + a);
        CHECK(detail::hyp2f1_near_one(a, a, 1 + a, 0.0) == doctest::Approx(limit).epsilon(1e-14));
        for (double w : {0.05, 1e-3})
            CHECK(detail::hyp2f1_near_one(a, a, 1 + a, w) == doctest::Approx(gauss_2f1(a, a, 1 + a, 1 - w)).epsilon(1e-13));
        const double tiny = detail::hyp2f1_near_one(a, a, 1 + a, 1e-20);
        CHECK(tiny < limit);
        CHECK(tiny == doctest::Approx(limit).epsilon(1e-7));
        CHECK_THROWS_AS(detail::hyp2f1_near_one(1.0, 1.0, 1.5, 0.0), DomainError);
    }

    TEST_CASE("2F1 domain errors")
    {
        CHECK_THROWS_AS(gauss_2f1(1, 1, 0, 0.5), DomainError);
        CHECK_THROWS_AS(gauss_2f1(1, 1, -2, 0.5), DomainError);
        CHECK_THROWS_AS(gauss_2f1(1, 1, 2, 1.0), DomainError);
        CHECK_THROWS_AS(gauss_2f1(1, 1, 2, -0.1), DomainError);
        CHECK(gauss_2f1(3, 4, 5, 0.0) == 1.0);
        CHECK_THROWS_AS(gauss_2f1_at_one(1, 1, 2), DomainError);
    }

    TEST_CASE("sin and csc of 2 pi / alpha")
    {
        for (double alpha : {2.5, 3.0, 4.0, 5.0, 7.0})
            CHECK(sin_2pi_over_alpha(alpha) == doctest::Approx(std::sin(2 * std::numbers::pi / alpha)).epsilon(1e-14));
        CHECK(sin_2pi_over_alpha(4.0) == doctest::Approx(1.0));
        // Near alpha = 2 the reduced form keeps full relative accuracy.
        const double eps = 1e-10;
        CHECK(sin_2pi_over_alpha(2.0 + eps) == doctest::Approx(std::numbers::pi * eps / 2.0).epsilon(1e-8));
        CHECK(std::isfinite(csc_2pi_over_alpha(std::nextafter(2.0, 3.0))));
        CHECK_THROWS_AS(sin_2pi_over_alpha(2.0), DomainError);
    }
}
