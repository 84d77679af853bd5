#include "cellmimo/mac.hpp"

#include "cellmimo/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cellmimo {

std::size_t ActivationState::total_active() const
{
    return std::accumulate(active_count.begin(), active_count.end(), std::size_t{0});
}

namespace {

// Partial Fisher-Yates: first k entries become a uniform k-subset.
void choose_prefix(std::vector<std::size_t>& v, std::size_t k, Rng& rng)
{
    for (std::size_t i = 0; i < k && i + 1 < v.size(); ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, v.size() - 1);
        std::swap(v[i], v[pick(rng)]);
    }
}

} // namespace

ActivationState activate(const NetworkRealization& realization, int K, Rng& rng)
{
    if (K < 1)
        throw ParameterError("activate: K must be >= 1");

    const std::size_t cells = realization.base_stations.size();
    const std::size_t n = realization.mobiles.size();
    const auto cap = static_cast<std::size_t>(K);

    std::vector<std::vector<std::size_t>> members(cells);
    for (std::size_t i = 0; i < n; ++i)
        members[realization.cell_of[i]].push_back(i);

    ActivationState state;
    state.active.assign(n, 0);
    state.population.resize(cells);
    state.active_count.resize(cells);

    const std::size_t rep_cell = n > 0 ? realization.cell_of[0] : cells;

    for (std::size_t c = 0; c < cells; ++c) {
        auto& m = members[c];
        state.population[c] = m.size();
        if (m.size() <= cap) {
            for (auto i : m)
                state.active[i] = 1;
            state.active_count[c] = m.size();
            continue;
        }
        if (c == rep_cell) {
            m.erase(std::find(m.begin(), m.end(), std::size_t{0}));
            state.active[0] = 1;
            choose_prefix(m, cap - 1, rng);
            for (std::size_t s = 0; s + 1 < cap; ++s)
                state.active[m[s]] = 1;
        } else {
            choose_prefix(m, cap, rng);
            for (std::size_t s = 0; s < cap; ++s)
                state.active[m[s]] = 1;
        }
        state.active_count[c] = cap;
    }
    return state;
}

namespace {

double log_poisson_pmf(int k, double x)
{
    return k * std::log(x) - x - std::lgamma(k + 1.0);
}

// Pr(Poisson(x) <= k), k >= 0.
double poisson_cdf(int k, double x)
{
    double sum = 0.0;
    for (int j = 0; j <= k; ++j)
        sum += std::exp(log_poisson_pmf(j, x));
    return std::min(sum, 1.0);
}

// Pr(Poisson(x) > k) / x for x <= k + 1, summed directly so no cancellation
// occurs as x -> 0. Terms decrease monotonically in this regime.
double poisson_upper_tail_over_x(int k, double x)
{
    const double log_x = std::log(x);
    double sum = 0.0;
    for (int j = k + 1;; ++j) {
        const double term = std::exp((j - 1) * log_x - x - std::lgamma(j + 1.0));
        sum += term;
        if (term <= 1e-18 * sum || term == 0.0)
            break;
    }
    return sum;
}

} // namespace

double h_of_a(double x, int K)
{
    if (K < 1)
        throw ParameterError("h_of_a: K must be >= 1");
    if (!(x >= 0.0))
        throw ParameterError("h_of_a: x must be non-negative");
    if (x == 0.0)
        return 1.0;

    const double below_k = poisson_cdf(K - 1, x);
    double first;
    if (x <= K + 1.0) {
        first = K * poisson_upper_tail_over_x(K, x);
    } else {
        const double at_most_k = below_k + std::exp(log_poisson_pmf(K, x));
        first = K * (1.0 - at_most_k) / x;
    }
    return std::min(first + below_k, 1.0);
}

namespace cell_area {

double normalizer()
{
    // c b^{a/c} / Gamma(a/c) for x^{a-1} exp(-b x^c), a = shape_power + 1.
    const double shape = (shape_power + 1.0) / stretch;
    return stretch * std::pow(rate, shape) / std::tgamma(shape);
}

double standardized_pdf(double u)
{
    if (u <= 0.0)
        return 0.0;
    static const double c = normalizer();
    return c * std::pow(u, shape_power) * std::exp(-rate * std::pow(u, stretch));
}

double pdf(double a, double rho_c) { return rho_c * standardized_pdf(rho_c * a); }

double standardized_upper_limit(double tail)
{
    // Pr(U > u) = Q(shape, rate u^stretch).
    const double shape = (shape_power + 1.0) / stretch;
    const double t = boost::math::gamma_q_inv(shape, tail);
    return std::pow(t / rate, 1.0 / stretch);
}

} // namespace cell_area

DensityResult active_density_analytic(double rho_c, double rho_m, int K)
{
    if (!(rho_c > 0.0) || !(rho_m > 0.0))
        throw ParameterError("active_density_analytic: densities must be positive");
    if (K < 1)
        throw ParameterError("active_density_analytic: K must be >= 1");

    constexpr double tolerance = 1e-8;
    const double ratio = rho_m / rho_c;  // mean mobiles per typical cell
    const double upper = cell_area::standardized_upper_limit(1e-12);

    auto integrand = [&](double u) { return u * h_of_a(ratio * u, K) * cell_area::standardized_pdf(u); };

    DensityResult out;
    out.upper_limit = upper;
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, upper, 20, tolerance, &error, &l1);
    out.levels = 20;
    out.error_estimate = error;
    if (!(error <= 10.0 * tolerance * std::abs(value)) || !std::isfinite(value))
        throw NumericError("active_density_analytic: quadrature did not converge (value " +
                           std::to_string(value) + ", error estimate " + std::to_string(error) +
                           ")");
    out.p_active = std::clamp(value, 0.0, 1.0);
    out.rho = rho_m * out.p_active;
    return out;
}

FractionEstimate empirical_active_fraction(std::span<const NetworkRealization> realizations, int K,
                                           Rng& rng)
{
    if (realizations.empty())
        throw ParameterError("empirical_active_fraction: no realizations");

    std::vector<double> active;
    std::vector<double> total;
    for (const auto& r : realizations) {
        const auto state = activate(r, K, rng);
        std::size_t a = 0;
        for (std::size_t i = 1; i < state.active.size(); ++i)
            a += state.active[i];
        active.push_back(static_cast<double>(a));
        total.push_back(static_cast<double>(state.active.size() - 1));
    }

    FractionEstimate out;
    out.realizations = realizations.size();
    const double sum_a = std::accumulate(active.begin(), active.end(), 0.0);
    const double sum_n = std::accumulate(total.begin(), total.end(), 0.0);
    out.mobiles = static_cast<std::size_t>(sum_n);
    if (sum_n == 0.0)
        return out;
    out.fraction = sum_a / sum_n;

    double se = 0.0;
    const double m = static_cast<double>(active.size());
    if (active.size() >= 2) {
        // Ratio-estimator variance across realizations.
        const double mean_n = sum_n / m;
        double ss = 0.0;
        for (std::size_t i = 0; i < active.size(); ++i) {
            const double d = active[i] - out.fraction * total[i];
            ss += d * d;
        }
        se = std::sqrt(ss / (m * (m - 1.0))) / mean_n;
    } else {
        se = std::sqrt(out.fraction * (1.0 - out.fraction) / sum_n);
    }
    out.ci_low = std::max(0.0, out.fraction - 1.959963984540054 * se);
    out.ci_high = std::min(1.0, out.fraction + 1.959963984540054 * se);
    return out;
}

} // namespace cellmimo
