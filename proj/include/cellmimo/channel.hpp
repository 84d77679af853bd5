#pragma once

#include "cellmimo/geometry.hpp"
#include "cellmimo/mac.hpp"
#include "cellmimo/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace cellmimo {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// N i.i.d. CN(0,1) entries: real and imaginary parts independent N(0, 1/2).
ComplexVector sample_fading(int N, Rng& rng);

/// Fading vectors of the active mobiles, one column each, in mobile order.
/// Inactive mobiles transmit nothing and carry no column.
struct ChannelSet
{
    ComplexMatrix gains;                    ///< N x (active count)
    std::vector<std::ptrdiff_t> column_of;  ///< mobile -> column, -1 if inactive

    bool has(std::size_t mobile) const { return column_of[mobile] >= 0; }
    auto column(std::size_t mobile) const { return gains.col(column_of[mobile]); }
};

ChannelSet sample_channels(const ActivationState& activation, int N, Rng& rng);

/// Pilot indices are 1..K; 0 marks an inactive mobile.
struct PilotAssignment
{
    std::vector<int> pilot_of;
    /// Active mobiles sharing the representative's pilot (index 1),
    /// representative first.
    std::vector<std::size_t> contamination_set;
};

/// Per cell, a uniform random injection of the active members into {1..K}.
/// The representative holds pilot 1.
PilotAssignment assign_pilots(const ActivationState& activation,
                              const NetworkRealization& realization, int K, Rng& rng);

enum class CsiMode
{
    perfect,
    pilot_contaminated,
};

std::string_view to_string(CsiMode mode);
CsiMode csi_mode_from_string(std::string_view s);

struct ChannelEstimate
{
    ComplexVector hhat;
    CsiMode mode = CsiMode::perfect;
};

/// perfect: hhat = g_0.
/// pilot_contaminated: hhat = sum_{i in T} r_i^{-alpha/2} sqrt(P_i) g_i, with
/// P_i = 1 for every member of T (they are active by construction).
/// Training noise is not modelled.
ChannelEstimate estimate_channel(CsiMode mode, std::span<const std::size_t> contamination_set,
                                 const NetworkRealization& realization, const ChannelSet& channels,
                                 double alpha);

} // namespace cellmimo
