#include "cellmimo/receiver.hpp"

#include "cellmimo/errors.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace cellmimo {

std::size_t InterfererSet::active() const
{
    std::size_t a = 0;
    for (double p : power)
        a += p > 0.0 ? 1 : 0;
    return a;
}

InterfererSet active_interferers(const NetworkRealization& realization, const ChannelSet& channels)
{
    InterfererSet out;
    const auto cols = channels.gains.cols();
    const std::size_t count = cols > 0 && channels.has(0) ? static_cast<std::size_t>(cols - 1)
                                                          : static_cast<std::size_t>(cols);
    out.distance.reserve(count);
    out.power.assign(count, 1.0);
    out.fading.resize(channels.gains.rows(), static_cast<Eigen::Index>(count));
    Eigen::Index c = 0;
    for (std::size_t i = 1; i < channels.column_of.size(); ++i) {
        if (!channels.has(i))
            continue;
        out.distance.push_back(norm(realization.mobiles[i]));
        out.fading.col(c++) = channels.column(i);
    }
    return out;
}

CovarianceMatrix build_covariance(const InterfererSet& interferers, double alpha)
{
    const auto N = static_cast<std::size_t>(interferers.fading.rows());
    const std::size_t active = interferers.active();
    if (active < N || N == 0)
        throw SingularCovarianceError(active, N);

    // Scale columns by sqrt(r^{-alpha} P) and form S S^H.
    ComplexMatrix scaled(interferers.fading.rows(), interferers.fading.cols());
    for (Eigen::Index j = 0; j < interferers.fading.cols(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double w = std::sqrt(interferers.power[k]) *
                         std::pow(interferers.distance[k], -alpha / 2.0);
        scaled.col(j) = w * interferers.fading.col(j);
    }

    CovarianceMatrix R;
    R.active_interferers = active;
    R.matrix.noalias() = scaled * scaled.adjoint();
    R.matrix = (0.5 * (R.matrix + R.matrix.adjoint())).eval();
    return R;
}

namespace {

using ExtendedComplex = std::complex<long double>;
using ExtendedMatrix = Eigen::Matrix<ExtendedComplex, Eigen::Dynamic, Eigen::Dynamic>;
using ExtendedVector = Eigen::Matrix<ExtendedComplex, Eigen::Dynamic, 1>;

ComplexVector extended_residual(const ComplexMatrix& R, const ComplexVector& w, const ComplexVector& b)
{
    const ExtendedVector r =
        b.cast<ExtendedComplex>() - R.cast<ExtendedComplex>() * w.cast<ExtendedComplex>();
    return r.cast<std::complex<double>>();
}

} // namespace

WeightSolution mmse_weight(const ComplexVector& hhat, const CovarianceMatrix& R)
{
    if (hhat.size() != R.matrix.rows())
        throw ParameterError("mmse_weight: dimension mismatch");

    const Eigen::LLT<ComplexMatrix> llt(R.matrix);
    if (llt.info() != Eigen::Success)
        throw NumericError("mmse_weight: covariance is not positive definite");

    WeightSolution out;
    out.reciprocal_condition = llt.rcond();
    if (!(out.reciprocal_condition > 1e-15)) {
        std::ostringstream msg;
        msg << "mmse_weight: covariance ill-conditioned (condition estimate "
            << 1.0 / out.reciprocal_condition << ")";
        throw NumericError(msg.str());
    }

    const double scale = hhat.norm();
    if (scale == 0.0)
        throw ParameterError("mmse_weight: zero channel estimate");

    out.w = llt.solve(hhat);
    ComplexVector res = extended_residual(R.matrix, out.w, hhat);
    out.residual = res.norm() / scale;
    for (int step = 0; step < 3 && out.residual >= 1e-12; ++step) {
        out.w += llt.solve(res);
        res = extended_residual(R.matrix, out.w, hhat);
        out.residual = res.norm() / scale;
    }
    if (!(out.residual < 1e-10)) {
        std::ostringstream msg;
        msg << "mmse_weight: residual " << out.residual << " above 1e-10 (condition estimate "
            << 1.0 / out.reciprocal_condition << ")";
        throw NumericError(msg.str());
    }
    return out;
}

double normalized_sir(double sir, int N, double r0, double alpha)
{
    return sir * std::exp(alpha * (std::log(r0) - 0.5 * std::log(static_cast<double>(N))));
}

SirSample output_sir(const ComplexVector& w, const ComplexVector& g0, double r0,
                     const InterfererSet& interferers, double alpha, CsiMode mode)
{
    if (w.norm() == 0.0)
        throw ParameterError("output_sir: zero weight vector");

    const double signal = std::pow(r0, -alpha) * std::norm(w.dot(g0));
    // dot() conjugates its first argument: v_j = w^H g_j.
    const ComplexVector v = interferers.fading.adjoint() * w;
    double interference = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        if (interferers.power[k] == 0.0)
            continue;
        interference +=
            interferers.power[k] * std::pow(interferers.distance[k], -alpha) * std::norm(v[j]);
    }
    if (!(interference > 0.0))
        throw NumericError("output_sir: zero interference power");

    SirSample s;
    s.sir = signal / interference;
    s.N = static_cast<int>(g0.size());
    s.r0 = r0;
    s.beta_N = normalized_sir(s.sir, s.N, r0, alpha);
    s.gamma = std::log1p(s.sir) / std::log(2.0);
    s.mode = mode;
    s.active_count = interferers.active();
    return s;
}

double perfect_csi_beta(const ComplexVector& g0, const CovarianceMatrix& R, double alpha)
{
    const auto sol = mmse_weight(g0, R);
    const double quad = g0.dot(sol.w).real();
    return quad * std::pow(static_cast<double>(g0.size()), -alpha / 2.0);
}

} // namespace cellmimo
