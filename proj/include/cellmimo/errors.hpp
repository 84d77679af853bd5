#pragma once

#include <stdexcept>
#include <string>

namespace cellmimo {

/// Invalid caller-supplied parameter (non-positive density, K < 1, ...).
class ParameterError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain a special function supports.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// Quadrature, root finding or a linear solve failed to meet its tolerance.
class NumericError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A realization could not be completed (e.g. rejection cap exhausted).
class DegenerateRealizationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Fewer active interferers than antennas: the covariance is rank deficient.
class SingularCovarianceError : public std::runtime_error
{
  public:
    SingularCovarianceError(std::size_t interferers, std::size_t antennas)
        : std::runtime_error("singular covariance: " + std::to_string(interferers) +
                             " active interferers for " + std::to_string(antennas) + " antennas"),
          interferers_(interferers),
          antennas_(antennas)
    {
    }

    std::size_t interferers() const noexcept { return interferers_; }
    std::size_t antennas() const noexcept { return antennas_; }

  private:
    std::size_t interferers_;
    std::size_t antennas_;
};

/// The fixed-point equation has no sign change in the searched bracket.
class NoSolutionError : public std::runtime_error
{
  public:
    NoSolutionError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
        : std::runtime_error(what), lo(lo), hi(hi), f_lo(f_lo), f_hi(f_hi)
    {
    }

    double lo;
    double hi;
    double f_lo;
    double f_hi;
};

} // namespace cellmimo
