#pragma once

namespace cellmimo {

/// Gauss hypergeometric 2F1(a, b; c; z) for real parameters and z in [0, 1).
///
/// z <= 0.9 sums the defining series directly. Above the crossover the
/// function is evaluated through the linear transformation to 1 - z, which
/// requires c - a - b not to be an integer; integer cases fall back to the
/// (slowly converging) series. Throws DomainError when c is a non-positive
/// integer or z is outside [0, 1).
double gauss_2f1(double a, double b, double c, double z);

/// Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)), the value of 2F1 at z = 1
/// when c - a - b > 0.
double gauss_2f1_at_one(double a, double b, double c);

/// sin(2 pi / alpha) for alpha > 2, evaluated as sin(pi (alpha-2)/alpha) so it
/// stays accurate as alpha -> 2+.
double sin_2pi_over_alpha(double alpha);

/// 1 / sin(2 pi / alpha); saturates at the largest finite double.
double csc_2pi_over_alpha(double alpha);

namespace detail {

inline constexpr double hyp2f1_crossover = 0.9;

/// Direct power series. Throws NumericError if it has not converged after
/// `max_terms` terms.
double hyp2f1_series(double a, double b, double c, double z, long max_terms = 2'000'000);

/// Linear transformation z -> 1 - z (c - a - b must not be an integer).
double hyp2f1_one_minus_z(double a, double b, double c, double z);

/// 2F1(a, b; c; 1 - w) through the same transformation, with w supplied
/// directly so that z within rounding of 1 keeps its accuracy. w = 0 is
/// allowed when c - a - b > 0.
double hyp2f1_near_one(double a, double b, double c, double w);

} // namespace detail

} // namespace cellmimo
