#pragma once

#include "cellmimo/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace cellmimo {

struct Point2
{
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double squared_distance(Point2 a, Point2 b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}
inline double distance(Point2 a, Point2 b) { return std::sqrt(squared_distance(a, b)); }

/// Network-wide parameters. Lengths are in an arbitrary but consistent unit
/// (the reference scenarios use metres).
struct SystemParams
{
    double rho_c = 2e-5;  ///< base stations per unit area
    double rho_m = 1e-3;  ///< mobiles per unit area
    int K = 10;           ///< max active mobiles per cell
    double alpha = 5.0;   ///< path-loss exponent
    int N = 32;           ///< antennas at the representative base station
    double R = 2000.0;    ///< network radius

    /// Throws ParameterError when any invariant is violated.
    void validate() const;

    /// n = round(pi rho_m R^2), the total mobile count including the representative.
    std::size_t mobile_count() const;

    /// c = n / N.
    double load_ratio() const { return static_cast<double>(mobile_count()) / N; }
};

void to_json(nlohmann::json& j, const SystemParams& p);
void from_json(const nlohmann::json& j, SystemParams& p);

/// Representative placed at a fixed distance from the origin, uniform angle.
struct FixedLinkLength
{
    double r0 = 100.0;
};

/// Representative placed uniformly at random in the origin cell.
struct UniformInOriginCell
{
};

using R0Mode = std::variant<FixedLinkLength, UniformInOriginCell>;

struct RealizationOptions
{
    std::size_t rejection_cap = 1'000'000;
};

/// One sampled deployment, already shifted so the base station closest to the
/// origin sits exactly at (0,0) as base_stations[0]. Mobile 0 is the
/// representative and is always served by base station 0.
struct NetworkRealization
{
    SystemParams params;
    std::uint64_t seed = 0;
    std::vector<Point2> base_stations;
    std::vector<Point2> mobiles;
    std::vector<std::size_t> cell_of;
    std::size_t empty_resamples = 0;  ///< empty base-station draws discarded
    std::size_t rejection_attempts = 0;

    double r0() const { return norm(mobiles.front()); }
    std::size_t cell_count() const { return base_stations.size(); }
};

void to_json(nlohmann::json& j, const NetworkRealization& r);
void from_json(const nlohmann::json& j, NetworkRealization& r);

/// Homogeneous PPP restricted to the disk B(0, radius).
std::vector<Point2> sample_ppp(double density, double radius, Rng& rng);

/// Uniform point in B(0, radius).
Point2 sample_uniform_disk(double radius, Rng& rng);

struct ShiftResult
{
    std::vector<Point2> points;  ///< nearest point first, translated to (0,0)
    Point2 offset;               ///< the translation that was subtracted
    std::size_t nearest_index = 0;
};

/// Moves the point nearest to `reference` to the front and translates every
/// point so that it lands on the origin. Relative order of the others is kept.
/// Ties go to the lowest index.
ShiftResult shift_to_nearest(std::span<const Point2> points, Point2 reference = {});

/// Uniform-grid nearest-neighbour index over a fixed set of sites.
/// Ties are broken towards the lowest site index.
class NearestSiteIndex
{
  public:
    explicit NearestSiteIndex(std::span<const Point2> sites);

    std::size_t nearest(Point2 q) const;

  private:
    std::vector<Point2> sites_;
    double min_x_ = 0.0;
    double min_y_ = 0.0;
    double cell_ = 1.0;
    long nx_ = 1;
    long ny_ = 1;
    std::vector<std::size_t> start_;  // CSR layout of bucket contents
    std::vector<std::size_t> items_;
};

/// Nearest-base-station map for every mobile (lowest index on ties).
std::vector<std::size_t> assign_cells(std::span<const Point2> base_stations,
                                      std::span<const Point2> mobiles);

NetworkRealization build_realization(const SystemParams& params, const R0Mode& mode, Rng& rng,
                                     const RealizationOptions& options = {});

/// Monte Carlo estimate of |C_j ∩ B(0,R)| for every base station j. Every
/// sample hits exactly one cell, so the estimates sum to pi R^2.
std::vector<double> estimate_cell_areas(const NetworkRealization& realization,
                                        double samples_per_unit_area, Rng& rng);

} // namespace cellmimo
