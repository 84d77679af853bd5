#include "cellmimo/specfun.hpp"

#include "cellmimo/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cellmimo {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

bool is_integer(double x) { return x == std::nearbyint(x); }

double recip_gamma(double x)
{
    if (is_nonpositive_integer(x))
        return 0.0;
    return 1.0 / std::tgamma(x);
}

} // namespace

namespace detail {

double hyp2f1_series(double a, double b, double c, double z, long max_terms)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double term = 1.0;
    double sum = 1.0;
    int small_in_a_row = 0;
    for (long k = 0; k < max_terms; ++k) {
        const double kd = static_cast<double>(k);
        term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
        sum += term;
        if (term == 0.0)
            return sum;
        if (std::abs(term) <= 0.5 * eps * std::abs(sum)) {
            if (++small_in_a_row >= 3)
                return sum;
        } else {
            small_in_a_row = 0;
        }
    }
    throw NumericError("hyp2f1_series: no convergence after " + std::to_string(max_terms) +
                       " terms at z = " + std::to_string(z));
}

double hyp2f1_one_minus_z(double a, double b, double c, double z)
{
    return hyp2f1_near_one(a, b, c, 1.0 - z);
}

double hyp2f1_near_one(double a, double b, double c, double w)
{
    const double s = c - a - b;
    if (is_integer(s))
        throw DomainError("hyp2f1_near_one: c - a - b is an integer");
    if (!(w >= 0.0 && w <= 1.0))
        throw DomainError("hyp2f1_near_one: w = " + std::to_string(w) + " outside [0, 1]");
    if (w == 0.0 && !(s > 0.0))
        throw DomainError("hyp2f1_near_one: diverges at z = 1 when c - a - b <= 0");
    const double gc = std::tgamma(c);

    const double coef1 = gc * std::tgamma(s) * recip_gamma(c - a) * recip_gamma(c - b);
    const double coef2 = gc * std::tgamma(-s) * recip_gamma(a) * recip_gamma(b);

    double out = 0.0;
    if (coef1 != 0.0)
        out += coef1 * hyp2f1_series(a, b, 1.0 - s, w);
    if (coef2 != 0.0)
        out += coef2 * std::pow(w, s) * hyp2f1_series(c - a, c - b, 1.0 + s, w);
    return out;
}

} // namespace detail

double gauss_2f1(double a, double b, double c, double z)
{
    if (is_nonpositive_integer(c))
        throw DomainError("gauss_2f1: c is a non-positive integer");
    if (!(z >= 0.0 && z < 1.0))
        throw DomainError("gauss_2f1: z = " + std::to_string(z) + " outside [0, 1)");
    if (z == 0.0)
        return 1.0;
    if (z <= detail::hyp2f1_crossover || is_integer(c - a - b) || is_nonpositive_integer(a) ||
        is_nonpositive_integer(b))
        return detail::hyp2f1_series(a, b, c, z);
    return detail::hyp2f1_one_minus_z(a, b, c, z);
}

double gauss_2f1_at_one(double a, double b, double c)
{
    if (!(c - a - b > 0.0))
        throw DomainError("gauss_2f1_at_one: requires c - a - b > 0");
    return std::tgamma(c) * std::tgamma(c - a - b) * recip_gamma(c - a) * recip_gamma(c - b);
}

double sin_2pi_over_alpha(double alpha)
{
    if (!(alpha > 2.0))
        throw DomainError("sin_2pi_over_alpha: alpha must exceed 2");
    return std::sin(std::numbers::pi * (alpha - 2.0) / alpha);
}

double csc_2pi_over_alpha(double alpha)
{
    const double s = sin_2pi_over_alpha(alpha);
    if (s <= 1.0 / std::numeric_limits<double>::max())
        return std::numeric_limits<double>::max();
    return 1.0 / s;
}

} // namespace cellmimo
