#include "cellmimo/geometry.hpp"

#include "cellmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cellmimo {

void SystemParams::validate() const
{
    auto fail = [](const std::string& what) { throw ParameterError("SystemParams: " + what); };
    if (!(rho_c > 0.0) || !std::isfinite(rho_c))
        fail("rho_c must be positive");
    if (!(rho_m > 0.0) || !std::isfinite(rho_m))
        fail("rho_m must be positive");
    if (K < 1)
        fail("K must be >= 1");
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        fail("alpha must exceed 2");
    if (N < 1)
        fail("N must be >= 1");
    if (!(R > 0.0) || !std::isfinite(R))
        fail("R must be positive");
    if (mobile_count() < 1)
        fail("round(pi rho_m R^2) must be >= 1");
}

std::size_t SystemParams::mobile_count() const
{
    return static_cast<std::size_t>(std::llround(std::numbers::pi * rho_m * R * R));
}

void to_json(nlohmann::json& j, const SystemParams& p)
{
    j = nlohmann::json{{"rho_c", p.rho_c}, {"rho_m", p.rho_m}, {"K", p.K},
                       {"alpha", p.alpha}, {"N", p.N},         {"R", p.R}};
}

void from_json(const nlohmann::json& j, SystemParams& p)
{
    SystemParams d;
    p.rho_c = j.value("rho_c", d.rho_c);
    p.rho_m = j.value("rho_m", d.rho_m);
    p.K = j.value("K", d.K);
    p.alpha = j.value("alpha", d.alpha);
    p.N = j.value("N", d.N);
    p.R = j.value("R", d.R);
}

namespace {

nlohmann::json points_to_json(const std::vector<Point2>& pts)
{
    auto arr = nlohmann::json::array();
    for (const auto& p : pts)
        arr.push_back({p.x, p.y});
    return arr;
}

std::vector<Point2> points_from_json(const nlohmann::json& arr)
{
    std::vector<Point2> pts;
    pts.reserve(arr.size());
    for (const auto& e : arr)
        pts.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    return pts;
}

} // namespace

void to_json(nlohmann::json& j, const NetworkRealization& r)
{
    j = nlohmann::json{{"params", r.params},
                       {"seed", r.seed},
                       {"base_stations", points_to_json(r.base_stations)},
                       {"mobiles", points_to_json(r.mobiles)},
                       {"cell_of", r.cell_of},
                       {"empty_resamples", r.empty_resamples},
                       {"rejection_attempts", r.rejection_attempts}};
}

void from_json(const nlohmann::json& j, NetworkRealization& r)
{
    r.params = j.at("params").get<SystemParams>();
    r.seed = j.value("seed", std::uint64_t{0});
    r.base_stations = points_from_json(j.at("base_stations"));
    r.mobiles = points_from_json(j.at("mobiles"));
    if (j.contains("cell_of"))
        r.cell_of = j.at("cell_of").get<std::vector<std::size_t>>();
    else
        r.cell_of = assign_cells(r.base_stations, r.mobiles);
    if (!r.cell_of.empty())
        r.cell_of[0] = 0;
    r.empty_resamples = j.value("empty_resamples", std::size_t{0});
    r.rejection_attempts = j.value("rejection_attempts", std::size_t{0});
}

Point2 sample_uniform_disk(double radius, Rng& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double theta = 2.0 * std::numbers::pi * u(rng);
    return {r * std::cos(theta), r * std::sin(theta)};
}

std::vector<Point2> sample_ppp(double density, double radius, Rng& rng)
{
    if (!(density > 0.0) || !std::isfinite(density))
        throw ParameterError("sample_ppp: density must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw ParameterError("sample_ppp: radius must be positive");

    const double mean = density * std::numbers::pi * radius * radius;
    std::poisson_distribution<long> count_dist(mean);
    const long count = count_dist(rng);

    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        pts.push_back(sample_uniform_disk(radius, rng));
    return pts;
}

ShiftResult shift_to_nearest(std::span<const Point2> points, Point2 reference)
{
    ShiftResult out;
    if (points.empty())
        return out;

    std::size_t best = 0;
    double best_d2 = squared_distance(points[0], reference);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double d2 = squared_distance(points[i], reference);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }

    out.nearest_index = best;
    out.offset = points[best];
    out.points.reserve(points.size());
    out.points.push_back({0.0, 0.0});
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i == best)
            continue;
        out.points.push_back({points[i].x - out.offset.x, points[i].y - out.offset.y});
    }
    return out;
}

NearestSiteIndex::NearestSiteIndex(std::span<const Point2> sites)
    : sites_(sites.begin(), sites.end())
{
    if (sites_.empty())
        throw ParameterError("NearestSiteIndex: no sites");

    double max_x = sites_[0].x;
    double max_y = sites_[0].y;
    min_x_ = sites_[0].x;
    min_y_ = sites_[0].y;
    for (const auto& p : sites_) {
        min_x_ = std::min(min_x_, p.x);
        min_y_ = std::min(min_y_, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const double w = std::max(max_x - min_x_, 1e-9);
    const double h = std::max(max_y - min_y_, 1e-9);
    // About one site per bucket, and no more buckets than sites along either axis.
    const double n_sites = static_cast<double>(sites_.size());
    cell_ = std::max({std::sqrt(w * h / n_sites), std::max(w, h) / n_sites, 1e-9});
    nx_ = std::max(1L, static_cast<long>(std::floor(w / cell_)) + 1);
    ny_ = std::max(1L, static_cast<long>(std::floor(h / cell_)) + 1);

    const auto buckets = static_cast<std::size_t>(nx_ * ny_);
    std::vector<std::size_t> bucket_of(sites_.size());
    start_.assign(buckets + 1, 0);
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        const long cx = std::clamp(static_cast<long>((sites_[i].x - min_x_) / cell_), 0L, nx_ - 1);
        const long cy = std::clamp(static_cast<long>((sites_[i].y - min_y_) / cell_), 0L, ny_ - 1);
        bucket_of[i] = static_cast<std::size_t>(cy * nx_ + cx);
        ++start_[bucket_of[i] + 1];
    }
    for (std::size_t b = 0; b < buckets; ++b)
        start_[b + 1] += start_[b];
    items_.resize(sites_.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    // Ascending site index inside each bucket.
    for (std::size_t i = 0; i < sites_.size(); ++i)
        items_[fill[bucket_of[i]]++] = i;
}

std::size_t NearestSiteIndex::nearest(Point2 q) const
{
    const long cx = static_cast<long>(std::floor((q.x - min_x_) / cell_));
    const long cy = static_cast<long>(std::floor((q.y - min_y_) / cell_));

    // Chebyshev distance (in buckets) from the query bucket to the grid.
    const long gap_x = cx < 0 ? -cx : (cx >= nx_ ? cx - nx_ + 1 : 0);
    const long gap_y = cy < 0 ? -cy : (cy >= ny_ ? cy - ny_ + 1 : 0);
    const long k_start = std::max(gap_x, gap_y);
    const long k_end = std::max({cx, nx_ - 1 - cx, cy, ny_ - 1 - cy});

    std::size_t best = std::numeric_limits<std::size_t>::max();
    double best_d2 = std::numeric_limits<double>::infinity();

    auto visit = [&](long bx, long by) {
        if (bx < 0 || by < 0 || bx >= nx_ || by >= ny_)
            return;
        const auto b = static_cast<std::size_t>(by * nx_ + bx);
        for (std::size_t s = start_[b]; s < start_[b + 1]; ++s) {
            const std::size_t i = items_[s];
            const double d2 = squared_distance(sites_[i], q);
            if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
                best_d2 = d2;
                best = i;
            }
        }
    };

    for (long k = k_start; k <= k_end; ++k) {
        // Sites in rings >= k are at least (k-1)*cell_ away.
        if (best != std::numeric_limits<std::size_t>::max() && k >= 1) {
            const double bound = static_cast<double>(k - 1) * cell_;
            if (best_d2 < bound * bound)
                break;
        }
        if (k == 0) {
            visit(cx, cy);
            continue;
        }
        // Only the part of ring k that overlaps the grid.
        const long x_lo = std::max(cx - k, 0L);
        const long x_hi = std::min(cx + k, nx_ - 1);
        const long y_lo = std::max(cy - k + 1, 0L);
        const long y_hi = std::min(cy + k - 1, ny_ - 1);
        for (const long by : {cy - k, cy + k})
            if (by >= 0 && by < ny_)
                for (long bx = x_lo; bx <= x_hi; ++bx)
                    visit(bx, by);
        for (const long bx : {cx - k, cx + k})
            if (bx >= 0 && bx < nx_)
                for (long by = y_lo; by <= y_hi; ++by)
                    visit(bx, by);
    }
    return best;
}

std::vector<std::size_t> assign_cells(std::span<const Point2> base_stations,
                                      std::span<const Point2> mobiles)
{
    if (base_stations.empty())
        throw ParameterError("assign_cells: no base stations");
    const NearestSiteIndex index(base_stations);
    std::vector<std::size_t> cell_of(mobiles.size());
    for (std::size_t i = 0; i < mobiles.size(); ++i)
        cell_of[i] = index.nearest(mobiles[i]);
    return cell_of;
}

NetworkRealization build_realization(const SystemParams& params, const R0Mode& mode, Rng& rng,
                                     const RealizationOptions& options)
{
    params.validate();

    NetworkRealization out;
    out.params = params;

    std::vector<Point2> raw;
    for (;;) {
        raw = sample_ppp(params.rho_c, params.R, rng);
        if (!raw.empty())
            break;
        ++out.empty_resamples;
    }
    out.base_stations = shift_to_nearest(raw).points;

    const NearestSiteIndex index(out.base_stations);
    const std::size_t n = params.mobile_count();
    out.mobiles.reserve(n);

    if (const auto* fixed = std::get_if<FixedLinkLength>(&mode)) {
        if (!(fixed->r0 > 0.0))
            throw ParameterError("build_realization: r0 must be positive");
        std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
        const double theta = u(rng);
        out.mobiles.push_back({fixed->r0 * std::cos(theta), fixed->r0 * std::sin(theta)});
    } else {
        bool placed = false;
        while (out.rejection_attempts < options.rejection_cap) {
            ++out.rejection_attempts;
            const Point2 p = sample_uniform_disk(params.R, rng);
            if (index.nearest(p) == 0) {
                out.mobiles.push_back(p);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw DegenerateRealizationError(
                "build_realization: no point of the origin cell found after " +
                std::to_string(options.rejection_cap) + " attempts");
    }

    for (std::size_t i = 1; i < n; ++i)
        out.mobiles.push_back(sample_uniform_disk(params.R, rng));

    out.cell_of.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.cell_of[i] = index.nearest(out.mobiles[i]);
    // The representative link terminates at base station 0 by definition; with a
    // fixed link length the representative may sit closer to a neighbour.
    out.cell_of[0] = 0;
    return out;
}

std::vector<double> estimate_cell_areas(const NetworkRealization& realization,
                                        double samples_per_unit_area, Rng& rng)
{
    if (!(samples_per_unit_area > 0.0))
        throw ParameterError("estimate_cell_areas: samples_per_unit_area must be positive");
    const auto& bs = realization.base_stations;
    if (bs.empty())
        throw ParameterError("estimate_cell_areas: no base stations");

    const double R = realization.params.R;
    const double disk_area = std::numbers::pi * R * R;
    std::vector<double> areas(bs.size(), 0.0);
    if (bs.size() == 1) {
        areas[0] = disk_area;
        return areas;
    }

    const auto total = static_cast<std::size_t>(
        std::max(1.0, std::ceil(samples_per_unit_area * disk_area)));
    const NearestSiteIndex index(bs);
    std::vector<std::size_t> hits(bs.size(), 0);
    for (std::size_t s = 0; s < total; ++s)
        ++hits[index.nearest(sample_uniform_disk(R, rng))];

    for (std::size_t j = 0; j < bs.size(); ++j)
        areas[j] = disk_area * static_cast<double>(hits[j]) / static_cast<double>(total);
    return areas;
}

} // namespace cellmimo
