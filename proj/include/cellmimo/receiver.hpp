#pragma once

#include "cellmimo/channel.hpp"
#include "cellmimo/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cellmimo {

/// Co-channel interferers seen by the representative base station.
struct InterfererSet
{
    std::vector<double> distance;  ///< r_j = |X_j|
    std::vector<double> power;     ///< P_j in {0,1}
    ComplexMatrix fading;          ///< N x m, column j is g_j

    std::size_t size() const { return distance.size(); }
    std::size_t active() const;
};

/// All active mobiles other than the representative, in mobile order.
InterfererSet active_interferers(const NetworkRealization& realization, const ChannelSet& channels);

struct CovarianceMatrix
{
    ComplexMatrix matrix;  ///< Hermitian, PSD
    std::size_t active_interferers = 0;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// R = sum_j r_j^{-alpha} P_j g_j g_j^H, Hermitian-symmetrized.
/// Throws SingularCovarianceError with fewer than N active interferers.
CovarianceMatrix build_covariance(const InterfererSet& interferers, double alpha);

struct WeightSolution
{
    ComplexVector w;
    double residual = 0.0;        ///< ||R w - hhat|| / ||hhat||
    double reciprocal_condition = 0.0;
};

/// w solves R w = hhat (so w^H = hhat^H R^{-1}) through a Cholesky
/// factorization and, when needed, one refinement step with an
/// extended-precision residual. Throws NumericError if the factorization
/// fails, rcond < 1e-15, or the residual stays above 1e-10.
WeightSolution mmse_weight(const ComplexVector& hhat, const CovarianceMatrix& R);

struct SirSample
{
    double sir = 0.0;
    double beta_N = 0.0;  ///< N^{-alpha/2} r0^alpha SIR
    double gamma = 0.0;   ///< log2(1 + SIR)
    CsiMode mode = CsiMode::perfect;
    std::uint64_t seed = 0;
    double r0 = 0.0;
    int N = 0;
    std::size_t active_count = 0;  ///< active interferers
};

/// SIR = r0^{-alpha} |w^H g0|^2 / sum_i r_i^{-alpha} P_i |w^H g_i|^2.
SirSample output_sir(const ComplexVector& w, const ComplexVector& g0, double r0,
                     const InterfererSet& interferers, double alpha,
                     CsiMode mode = CsiMode::perfect);

/// N^{-alpha/2} g0^H R^{-1} g0.
double perfect_csi_beta(const ComplexVector& g0, const CovarianceMatrix& R, double alpha);

/// beta_N = N^{-alpha/2} r0^alpha sir.
double normalized_sir(double sir, int N, double r0, double alpha);

} // namespace cellmimo
