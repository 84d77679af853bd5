#pragma once

#include "cellmimo/geometry.hpp"
#include "cellmimo/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cellmimo {

/// Per-mobile transmit flags P_i in {0,1} plus per-cell bookkeeping.
struct ActivationState
{
    std::vector<std::uint8_t> active;       ///< indexed by mobile
    std::vector<std::size_t> population;    ///< mobiles per cell
    std::vector<std::size_t> active_count;  ///< active mobiles per cell

    bool is_active(std::size_t mobile) const { return active[mobile] != 0; }
    std::size_t total_active() const;
};

/// K-limited activation. Cells with at most K members are fully active; larger
/// cells activate K members chosen uniformly. In the representative's cell the
/// representative is forced active and the other K-1 slots are drawn uniformly
/// from the remaining members.
ActivationState activate(const NetworkRealization& realization, int K, Rng& rng);

/// Probability that a mobile in a cell of area a is active in the limit,
/// written as a function of x = rho_m * a:
///   h = K * Pr(Poisson(x) > K) / x + Pr(Poisson(x) <= K - 1).
/// h(0) = 1.
double h_of_a(double x, int K);

/// Generalized-gamma approximation of the Poisson-Voronoi typical cell area,
/// f_A(a) = C rho_c (rho_c a)^2.311 exp(-3.032 (rho_c a)^1.080).
/// C is the exact normalizer for these exponents (~15.2243).
namespace cell_area {

inline constexpr double shape_power = 2.311;
inline constexpr double rate = 3.032;
inline constexpr double stretch = 1.080;
inline constexpr double rounded_prefactor = 15.225;

double normalizer();
/// Density in the standardized variable u = rho_c * a.
double standardized_pdf(double u);
double pdf(double a, double rho_c);
/// u beyond which the standardized tail mass is below `tail`.
double standardized_upper_limit(double tail);

} // namespace cell_area

struct DensityResult
{
    double p_active = 0.0;  ///< limiting activation probability
    double rho = 0.0;       ///< active density rho_m * p_active
    double error_estimate = 0.0;
    double upper_limit = 0.0;  ///< integration cutoff in units of 1/rho_c
    unsigned levels = 0;
};

/// p_active = rho_c * E[A h(A)] with A distributed per cell_area::pdf,
/// computed by adaptive Gauss-Kronrod quadrature to relative tolerance 1e-8.
DensityResult active_density_analytic(double rho_c, double rho_m, int K);

struct FractionEstimate
{
    double fraction = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t mobiles = 0;
    std::size_t realizations = 0;
};

/// Pooled fraction of non-representative mobiles activated over a batch of
/// realizations, with a normal-approximation 95% interval built from the
/// between-realization spread (mobiles in one cell are not independent).
FractionEstimate empirical_active_fraction(std::span<const NetworkRealization> realizations, int K,
                                           Rng& rng);

} // namespace cellmimo
