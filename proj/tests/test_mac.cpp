#include "cellmimo/errors.hpp"
#include "cellmimo/mac.hpp"

#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

using namespace cellmimo;

namespace {

// A hand-built realization: base stations at the given points, mobiles listed
// per cell (cell index = position in `per_cell`).
NetworkRealization make_cells(const std::vector<std::size_t>& per_cell)
{
    NetworkRealization r;
    r.params.K = 3;
    for (std::size_t c = 0; c < per_cell.size(); ++c) {
        r.base_stations.push_back({1000.0 * static_cast<double>(c), 0.0});
        for (std::size_t m = 0; m < per_cell[c]; ++m) {
            r.mobiles.push_back({1000.0 * static_cast<double>(c) + 1.0 + static_cast<double>(m), 1.0});
            r.cell_of.push_back(c);
        }
    }
    return r;
}

} // namespace

TEST_SUITE("mac")
{
    TEST_CASE("h(x) against the Poisson-mixture oracle")
    {
        const double xs[] = {0.0, 1e-6, 0.01, 0.1, 1.0, 5.0, 20.0, 50.0, 200.0, 1000.0};
        double worst = 0.0;
        for (int K = 1; K <= 20; ++K)
            for (double x : xs) {
                const double err = std::abs(h_of_a(x, K) - static_cast<double>(oracle::activation_mixture(x, K)));
                worst = std::max(worst, err);
            }
        CHECK(worst < 1e-12);
    }

    TEST_CASE("h(x) limits")
    {
        CHECK(h_of_a(0.0, 5) == 1.0);
        CHECK(h_of_a(1e-300, 1) == doctest::Approx(1.0));
        // Large cells: about K / x of the mobiles are active.
        CHECK(h_of_a(1e5, 10) == doctest::Approx(10.0 / 1e5).epsilon(1e-3));
        CHECK_THROWS_AS(h_of_a(-1.0, 3), ParameterError);
        CHECK_THROWS_AS(h_of_a(1.0, 0), ParameterError);
    }

    TEST_CASE("h(x) is non-increasing in x and non-decreasing in K")
    {
        for (int K = 1; K <= 10; ++K) {
            double prev = 1.0;
            for (double x = 0.01; x < 300.0; x *= 1.3) {
                const double h = h_of_a(x, K);
                CHECK(h <= prev + 1e-15);
                CHECK(h_of_a(x, K + 1) >= h - 1e-15);
                prev = h;
            }
        }
    }

    TEST_CASE("cell-area density integrates to one with mean near one")
    {
        // Integrated independently of the library's cutoff choice.
        auto pdf = [](double u) { return cell_area::standardized_pdf(u); };
        const double inf = std::numeric_limits<double>::infinity();
        const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, 0.0, inf, 15, 1e-12);
        const double mean = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double u) { return u * pdf(u); }, 0.0, inf, 15, 1e-12);
        CHECK(std::abs(mass - 1.0) < 1e-9);
        CHECK(mean == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(cell_area::normalizer() == doctest::Approx(cell_area::rounded_prefactor).epsilon(1e-4));
        CHECK(cell_area::pdf(2.0 / 2e-5, 2e-5) == doctest::Approx(2e-5 * cell_area::standardized_pdf(2.0)));
    }

    TEST_CASE("upper limit leaves the requested tail")
    {
        const double u = cell_area::standardized_upper_limit(1e-12);
        const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [](double v) { return cell_area::standardized_pdf(v); }, u,
            std::numeric_limits<double>::infinity(), 15, 1e-10);
        CHECK(tail == doctest::Approx(1e-12).epsilon(1e-3));
    }

    TEST_CASE("active density: limits and ordering")
    {
        const auto k1 = active_density_analytic(2e-5, 1e-3, 1);
        const auto k10 = active_density_analytic(2e-5, 1e-3, 10);
        const auto k20 = active_density_analytic(2e-5, 1e-3, 20);
        CHECK(k1.rho < k10.rho);
        CHECK(k10.rho < k20.rho);
        // At most K active per cell on average.
        CHECK(k1.rho <= 1 * 2e-5 * (1.0 + 1e-6));
        CHECK(k10.rho <= 10 * 2e-5 * (1.0 + 1e-6));
        // Sparse mobiles: almost everyone transmits, so p_active tends to the
        // model's mean standardized area (slightly below one for these exponents).
        const double model_mean = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [](double u) { return u * cell_area::standardized_pdf(u); }, 0.0,
            std::numeric_limits<double>::infinity(), 15, 1e-12);
        CHECK(active_density_analytic(2e-5, 1e-7, 10).p_active == doctest::Approx(model_mean).epsilon(1e-5));
        // Dense mobiles: rho -> K rho_c.
        CHECK(active_density_analytic(2e-5, 1.0, 5).rho == doctest::Approx(5 * 2e-5).epsilon(1e-3));
        CHECK_THROWS_AS(active_density_analytic(0.0, 1e-3, 1), ParameterError);
    }

    TEST_CASE("activation caps every cell at K and keeps the representative")
    {
        const auto real = make_cells({7, 2, 5, 0, 3});
        Rng rng = make_rng(1);
        for (int rep = 0; rep < 200; ++rep) {
            const auto s = activate(real, 3, rng);
            CHECK(s.is_active(0));
            CHECK(s.active_count == std::vector<std::size_t>{3, 2, 3, 0, 3});
            CHECK(s.population == std::vector<std::size_t>{7, 2, 5, 0, 3});
            CHECK(s.total_active() == 11);
            std::vector<std::size_t> counted(5, 0);
            for (std::size_t i = 0; i < real.mobiles.size(); ++i)
                counted[real.cell_of[i]] += s.active[i];
            CHECK(counted == s.active_count);
        }
    }

    TEST_CASE("activation selects uniformly inside a crowded cell")
    {
        // Representative's cell: 7 members, K = 3, so each of the 6 others is
        // active with probability 2/6. Second cell: 5 members, probability 3/5.
        const auto real = make_cells({7, 5});
        Rng rng = make_rng(2);
        const int reps = 30000;
        std::vector<double> freq(real.mobiles.size(), 0.0);
        for (int rep = 0; rep < reps; ++rep) {
            const auto s = activate(real, 3, rng);
            for (std::size_t i = 0; i < freq.size(); ++i)
                freq[i] += s.active[i];
        }
        CHECK(freq[0] == reps);
        for (std::size_t i = 1; i < 7; ++i)
            CHECK(freq[i] / reps == doctest::Approx(2.0 / 6.0).epsilon(0.03));
        for (std::size_t i = 7; i < 12; ++i)
            CHECK(freq[i] / reps == doctest::Approx(3.0 / 5.0).epsilon(0.03));
    }

    TEST_CASE("empirical fraction excludes the representative")
    {
        const std::vector<NetworkRealization> reals{make_cells({1, 4})};
        Rng rng = make_rng(3);
        const auto f = empirical_active_fraction(reals, 3, rng);
        CHECK(f.mobiles == 4);
        CHECK(f.fraction == doctest::Approx(3.0 / 4.0));
        CHECK(f.ci_low <= f.fraction);
        CHECK(f.ci_high >= f.fraction);
    }
}
