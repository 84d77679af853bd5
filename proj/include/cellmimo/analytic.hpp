#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cellmimo {

/// How the finite-network load ratio c = n/N enters the fixed-point equation.
///
/// The equation's finite-network correction accounts for interferers outside
/// the disk. Written in normalized distance u = r / sqrt(N) the disk edge sits
/// at U = sqrt(c / (pi rho_m)), and the correction is
///   2 pi rho beta / ((alpha-2) (U^alpha + beta)^{1-2/alpha})
///       * 2F1(1-2/alpha, 1-2/alpha; 2-2/alpha; beta / (beta + U^alpha)),
/// i.e. c replaced by c_eff = pi rho U^alpha.
/// `literal` uses c_eff = c, which is only meaningful in a unit
/// system where pi rho beta is commensurate with c.
enum class LoadScaling
{
    disk_geometry,
    literal,
};

struct FixedPointInput
{
    double rho = 0.0;    ///< active interferer density
    double c = 0.0;      ///< n / N; +inf drops the finite-network term
    double alpha = 0.0;
    double rho_m = 0.0;  ///< density defining n; 0 means "same as rho"
    LoadScaling scaling = LoadScaling::disk_geometry;

    void validate() const;
    /// c_eff, the quantity added to pi rho beta in the fixed-point equation.
    double effective_load() const;
};

/// (2 pi^2 rho / alpha) csc(2 pi / alpha) beta^{2/alpha}
double theorem1_lhs(double beta, const FixedPointInput& in);
/// 1 + finite-network correction (see LoadScaling).
double theorem1_rhs(double beta, const FixedPointInput& in);

struct BetaSolution
{
    double beta = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_residual = 0.0;  ///< |lhs - rhs| / lhs
    std::size_t sign_changes = 0;    ///< over the scanned log grid; 1 when unique
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

/// Smallest positive root of lhs = rhs. The log grid over [1e-12, 1e12] is
/// scanned for sign changes (8 points per decade, extended upwards by factors
/// of 1e3 when no change is found) and the first bracket is refined with
/// TOMS 748. Throws NoSolutionError if no sign change exists up to 1e300,
/// NumericError if the residual certificate exceeds 1e-9.
BetaSolution solve_beta(const FixedPointInput& in);

/// Root of lhs = 1: [alpha sin(2 pi/alpha) / (2 pi^2 rho)]^{alpha/2}.
double beta_large_load(double rho, double alpha);

/// log2(1 + [N alpha sin(2 pi/alpha) / (2 pi^2 rho r0^2)]^{alpha/2}).
double gamma_approx(int N, double alpha, double rho, double r0);

/// Pr(gamma <= tau) = exp(-(rho_c/rho) N (alpha/2pi) sin(2pi/alpha) (2^tau - 1)^{-2/alpha}).
double se_cdf(double tau, int N, double alpha, double rho, double rho_c);

/// Inverse of se_cdf in tau, for p in (0, 1).
double se_quantile(double p, int N, double alpha, double rho, double rho_c);

/// Expected sum of (|B_j|/2)^{-alpha} over base stations beyond `radius`:
/// 2 pi rho_c 2^alpha radius^{2-alpha} / (alpha - 2).
struct TailCorrection
{
    double rho_c = 0.0;
    double radius = 0.0;

    double value(double alpha) const;
};

/// Worst-case pilot contamination bound: one contaminator in every other
/// cell, each at the closest admissible distance |B_j|/2,
///   beta r0^{-2 alpha} / (r0^{-alpha} + sum_{j>=1} (|B_j|/2)^{-alpha} [+ tail]).
/// The value bounds N^{-alpha/2} SIR; multiply by r0^alpha for the
/// normalized SIR. `base_station_distances` excludes the origin station.
double pc_beta_lower_bound(double r0, std::span<const double> base_station_distances, double beta,
                           double alpha, std::optional<TailCorrection> tail = std::nullopt);

/// beta r0^{-2 alpha} / (r0^{-alpha} + sum_{j in T, j != 0} r_j^{-alpha} P_j).
/// Same normalization as pc_beta_lower_bound. Empty `powers` means P_j = 1.
double theorem2_bound_per_realization(double r0, std::span<const double> contaminator_distances,
                                      double beta, double alpha,
                                      std::span<const double> powers = {});

/// Spectral efficiency implied by a bound on N^{-alpha/2} SIR.
double bound_spectral_efficiency(double bound, int N, double alpha);

struct AnalyticResult
{
    double rho = 0.0;
    double c = 0.0;
    double beta = 0.0;
    double beta_large_load = 0.0;
    double gamma_approx = 0.0;
    std::vector<std::pair<double, double>> cdf;  ///< (tau, Pr(gamma <= tau))
    std::optional<double> pc_beta_lower;
};

} // namespace cellmimo
