#include "cellmimo/channel.hpp"

#include "cellmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>
#include <string>

namespace cellmimo {

ComplexVector sample_fading(int N, Rng& rng)
{
    if (N < 1)
        throw ParameterError("sample_fading: N must be >= 1");
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    ComplexVector g(N);
    for (int k = 0; k < N; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        g[k] = {re, im};
    }
    return g;
}

ChannelSet sample_channels(const ActivationState& activation, int N, Rng& rng)
{
    if (N < 1)
        throw ParameterError("sample_channels: N must be >= 1");
    const std::size_t n = activation.active.size();
    ChannelSet out;
    out.column_of.assign(n, -1);
    std::ptrdiff_t cols = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (activation.active[i])
            out.column_of[i] = cols++;

    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    out.gains.resize(N, cols);
    for (std::ptrdiff_t c = 0; c < cols; ++c)
        for (int k = 0; k < N; ++k) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            out.gains(k, c) = {re, im};
        }
    return out;
}

PilotAssignment assign_pilots(const ActivationState& activation,
                              const NetworkRealization& realization, int K, Rng& rng)
{
    if (K < 1)
        throw ParameterError("assign_pilots: K must be >= 1");
    const std::size_t n = activation.active.size();
    const std::size_t cells = realization.base_stations.size();

    std::vector<std::vector<std::size_t>> active_members(cells);
    for (std::size_t i = 0; i < n; ++i)
        if (activation.active[i])
            active_members[realization.cell_of[i]].push_back(i);

    PilotAssignment out;
    out.pilot_of.assign(n, 0);
    const std::size_t rep_cell = realization.cell_of[0];

    std::vector<int> pool;
    for (std::size_t c = 0; c < cells; ++c) {
        auto& m = active_members[c];
        if (m.size() > static_cast<std::size_t>(K))
            throw ParameterError("assign_pilots: cell " + std::to_string(c) + " has " +
                                 std::to_string(m.size()) + " active mobiles for " +
                                 std::to_string(K) + " pilots");
        if (m.empty())
            continue;

        pool.resize(static_cast<std::size_t>(K));
        std::iota(pool.begin(), pool.end(), 1);
        std::size_t first_free = 0;
        if (c == rep_cell && activation.active[0]) {
            out.pilot_of[0] = 1;
            m.erase(std::find(m.begin(), m.end(), std::size_t{0}));
            first_free = 1;
        }
        for (std::size_t s = 0; s < m.size(); ++s) {
            std::uniform_int_distribution<std::size_t> pick(first_free + s, pool.size() - 1);
            std::swap(pool[first_free + s], pool[pick(rng)]);
            out.pilot_of[m[s]] = pool[first_free + s];
        }
    }

    out.contamination_set.push_back(0);
    for (std::size_t i = 1; i < n; ++i)
        if (out.pilot_of[i] == 1)
            out.contamination_set.push_back(i);
    return out;
}

std::string_view to_string(CsiMode mode)
{
    return mode == CsiMode::perfect ? "perfect" : "pc";
}

CsiMode csi_mode_from_string(std::string_view s)
{
    if (s == "perfect")
        return CsiMode::perfect;
    if (s == "pc" || s == "pilot_contaminated")
        return CsiMode::pilot_contaminated;
    throw ParameterError("unknown CSI mode '" + std::string(s) + "'");
}

ChannelEstimate estimate_channel(CsiMode mode, std::span<const std::size_t> contamination_set,
                                 const NetworkRealization& realization, const ChannelSet& channels,
                                 double alpha)
{
    if (contamination_set.empty() || contamination_set.front() != 0)
        throw std::logic_error("estimate_channel: representative missing from contamination set");

    ChannelEstimate out;
    out.mode = mode;
    if (mode == CsiMode::perfect) {
        out.hhat = channels.column(0);
        return out;
    }

    if (alpha <= 4.0) {
        static std::once_flag warned;
        std::call_once(warned, [alpha] {
            std::clog << "warning: pilot-contaminated estimate with alpha = " << alpha
                      << " <= 4; the contamination bounds assume alpha > 4\n";
        });
    }

    out.hhat = ComplexVector::Zero(channels.gains.rows());
    for (const std::size_t i : contamination_set) {
        if (!channels.has(i))
            throw std::logic_error("estimate_channel: contaminator " + std::to_string(i) +
                                   " has no fading vector");
        const double r = norm(realization.mobiles[i]);
        out.hhat += std::pow(r, -alpha / 2.0) * channels.column(i);
    }
    return out;
}

} // namespace cellmimo
