#include "cellmimo/analytic.hpp"

#include "cellmimo/errors.hpp"
#include "cellmimo/specfun.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <algorithm>
#include <iostream>
#include <limits>
#include <optional>
#include <numbers>
#include <sstream>

namespace cellmimo {

namespace {

constexpr double pi = std::numbers::pi;

void require_alpha(double alpha, const char* who)
{
    if (!(alpha > 2.0))
        throw ParameterError(std::string(who) + ": alpha must exceed 2");
}

} // namespace

void FixedPointInput::validate() const
{
    if (!(rho > 0.0))
        throw ParameterError("FixedPointInput: rho must be positive");
    if (!(c > 0.0))
        throw ParameterError("FixedPointInput: c must be positive");
    if (!(rho_m >= 0.0))
        throw ParameterError("FixedPointInput: rho_m must be non-negative");
    require_alpha(alpha, "FixedPointInput");
}

double FixedPointInput::effective_load() const
{
    if (std::isinf(c))
        return c;
    if (scaling == LoadScaling::literal)
        return c;
    const double density = rho_m > 0.0 ? rho_m : rho;
    const double log_u2 = std::log(c / (pi * density));
    return std::exp(std::log(pi * rho) + 0.5 * alpha * log_u2);
}

double theorem1_lhs(double beta, const FixedPointInput& in)
{
    return 2.0 * pi * pi * in.rho / in.alpha * csc_2pi_over_alpha(in.alpha) *
           std::pow(beta, 2.0 / in.alpha);
}

double theorem1_rhs(double beta, const FixedPointInput& in)
{
    const double c_eff = in.effective_load();
    if (std::isinf(c_eff))
        return 1.0;
    const double a = 1.0 - 2.0 / in.alpha;
    // Divide c_eff + pi rho beta through by pi rho to keep the magnitudes sane.
    const double v = c_eff / (pi * in.rho);
    const double z = beta / (beta + v);
    const double w = v / (beta + v);
    const double f = z <= detail::hyp2f1_crossover ? gauss_2f1(a, a, 1.0 + a, z)
                                                   : detail::hyp2f1_near_one(a, a, 1.0 + a, w);
    const double term = 2.0 * pi * in.rho * beta / ((in.alpha - 2.0) * std::pow(v + beta, a)) * f;
    return 1.0 + term;
}

double beta_large_load(double rho, double alpha)
{
    require_alpha(alpha, "beta_large_load");
    if (!(rho > 0.0))
        throw ParameterError("beta_large_load: rho must be positive");
    return std::pow(alpha * sin_2pi_over_alpha(alpha) / (2.0 * pi * pi * rho), alpha / 2.0);
}

BetaSolution solve_beta(const FixedPointInput& in)
{
    in.validate();

    auto g = [&](double t) {
        const double beta = std::exp(t);
        return theorem1_lhs(beta, in) - theorem1_rhs(beta, in);
    };
    // At large beta both sides grow like beta^{2/alpha} with equal leading
    // coefficients, so their difference eventually drowns in rounding error.
    // Such points carry no sign information and are skipped by the scan.
    auto resolvable = [&](double t) {
        const double beta = std::exp(t);
        const double l = theorem1_lhs(beta, in);
        const double r = theorem1_rhs(beta, in);
        return std::abs(l - r) > 1e-12 * std::max(std::abs(l), std::abs(r));
    };

    const double step = std::log(10.0) / 8.0;
    const double t_lo = std::log(1e-12);
    double t_hi = std::log(1e12);
    const double t_cap = std::log(1e300);

    std::vector<std::pair<double, double>> brackets;
    double t = t_lo;
    const double g_lo = g(t);
    double g_last = g_lo;
    // Last resolvable grid point.
    std::optional<std::pair<double, double>> anchor;
    if (resolvable(t))
        anchor = std::make_pair(t, g_lo);
    for (;;) {
        while (t < t_hi - 1e-12) {
            const double t_next = std::min(t + step, t_hi);
            const double g_next = g(t_next);
            g_last = g_next;
            t = t_next;
            if (!resolvable(t_next))
                continue;
            if (anchor && (anchor->second < 0.0) != (g_next < 0.0))
                brackets.emplace_back(anchor->first, t_next);
            anchor = std::make_pair(t_next, g_next);
        }
        if (!brackets.empty() || t_hi >= t_cap)
            break;
        t_hi = std::min(t_hi + std::log(1e3), t_cap);
    }

    if (brackets.empty()) {
        const double t_end = anchor ? anchor->first : t;
        const double g_end = anchor ? anchor->second : g_last;
        std::ostringstream msg;
        msg << "solve_beta: no sign change of lhs - rhs in [1e-12, " << std::exp(t_hi)
            << "] (lhs - rhs = " << g_lo << " at 1e-12 and " << g_end
            << " at the last resolvable point beta = " << std::exp(t_end) << ")";
        throw NoSolutionError(msg.str(), 1e-12, std::exp(t_hi), g_lo, g_end);
    }

    const auto [a, b] = brackets.front();
    std::uintmax_t iterations = 200;
    const auto root = boost::math::tools::toms748_solve(
        g, a, b, boost::math::tools::eps_tolerance<double>(52), iterations);

    BetaSolution out;
    // Pick the endpoint with the smaller residual.
    const double t_root = std::abs(g(root.first)) <= std::abs(g(root.second)) ? root.first
                                                                              : root.second;
    out.beta = std::exp(t_root);
    out.lhs = theorem1_lhs(out.beta, in);
    out.rhs = theorem1_rhs(out.beta, in);
    out.relative_residual = std::abs(out.lhs - out.rhs) / out.lhs;
    out.sign_changes = brackets.size();
    out.bracket_lo = 1e-12;
    out.bracket_hi = std::exp(t_hi);

    if (out.sign_changes > 1)
        std::clog << "warning: solve_beta found " << out.sign_changes
                  << " sign changes; returning the smallest root\n";
    if (!(out.relative_residual < 1e-9)) {
        std::ostringstream msg;
        msg << "solve_beta: residual certificate " << out.relative_residual << " at beta = "
            << out.beta;
        throw NumericError(msg.str());
    }
    return out;
}

double gamma_approx(int N, double alpha, double rho, double r0)
{
    require_alpha(alpha, "gamma_approx");
    if (N < 1 || !(rho > 0.0) || !(r0 > 0.0))
        throw ParameterError("gamma_approx: N, rho and r0 must be positive");
    const double base = N * alpha * sin_2pi_over_alpha(alpha) / (2.0 * pi * pi * rho * r0 * r0);
    return std::log1p(std::pow(base, alpha / 2.0)) / std::numbers::ln2;
}

namespace {

double cdf_scale(int N, double alpha, double rho, double rho_c)
{
    return rho_c / rho * N * alpha / (2.0 * pi) * sin_2pi_over_alpha(alpha);
}

} // namespace

double se_cdf(double tau, int N, double alpha, double rho, double rho_c)
{
    require_alpha(alpha, "se_cdf");
    if (!(tau > 0.0))
        throw ParameterError("se_cdf: tau must be positive");
    const double x = cdf_scale(N, alpha, rho, rho_c);
    const double snr_like = std::expm1(tau * std::numbers::ln2);
    return std::exp(-x * std::pow(snr_like, -2.0 / alpha));
}

double se_quantile(double p, int N, double alpha, double rho, double rho_c)
{
    require_alpha(alpha, "se_quantile");
    if (!(p > 0.0 && p < 1.0))
        throw ParameterError("se_quantile: p must lie in (0, 1)");
    const double x = cdf_scale(N, alpha, rho, rho_c);
    return std::log1p(std::pow(x / -std::log(p), alpha / 2.0)) / std::numbers::ln2;
}

double TailCorrection::value(double alpha) const
{
    if (!(radius > 0.0) || std::isinf(radius))
        return 0.0;
    return 2.0 * pi * rho_c * std::pow(2.0, alpha) * std::pow(radius, 2.0 - alpha) / (alpha - 2.0);
}

double pc_beta_lower_bound(double r0, std::span<const double> base_station_distances, double beta,
                           double alpha, std::optional<TailCorrection> tail)
{
    require_alpha(alpha, "pc_beta_lower_bound");
    if (!(r0 > 0.0))
        throw ParameterError("pc_beta_lower_bound: r0 must be positive");
    // Scaled by r0^alpha: beta r0^{-alpha} / (1 + sum (2 r0 / |B_j|)^alpha + r0^alpha tail).
    double ratio_sum = 0.0;
    for (const double d : base_station_distances) {
        if (!(d > 0.0))
            throw ParameterError("pc_beta_lower_bound: base-station distances must be positive");
        ratio_sum += std::pow(2.0 * r0 / d, alpha);
    }
    if (tail)
        ratio_sum += std::pow(r0, alpha) * tail->value(alpha);
    return beta * std::pow(r0, -alpha) / (1.0 + ratio_sum);
}

double theorem2_bound_per_realization(double r0, std::span<const double> contaminator_distances,
                                      double beta, double alpha, std::span<const double> powers)
{
    require_alpha(alpha, "theorem2_bound_per_realization");
    if (!(r0 > 0.0))
        throw ParameterError("theorem2_bound_per_realization: r0 must be positive");
    if (!powers.empty() && powers.size() != contaminator_distances.size())
        throw ParameterError("theorem2_bound_per_realization: powers/distances size mismatch");
    double ratio_sum = 0.0;
    for (std::size_t j = 0; j < contaminator_distances.size(); ++j) {
        const double p = powers.empty() ? 1.0 : powers[j];
        if (std::isinf(contaminator_distances[j]))
            continue;
        ratio_sum += p * std::pow(r0 / contaminator_distances[j], alpha);
    }
    return beta * std::pow(r0, -alpha) / (1.0 + ratio_sum);
}

double bound_spectral_efficiency(double bound, int N, double alpha)
{
    return std::log1p(std::pow(static_cast<double>(N), alpha / 2.0) * bound) / std::numbers::ln2;
}

} // namespace cellmimo
