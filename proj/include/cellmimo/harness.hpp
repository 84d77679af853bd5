#pragma once

#include "cellmimo/analytic.hpp"
#include "cellmimo/channel.hpp"
#include "cellmimo/geometry.hpp"
#include "cellmimo/mac.hpp"
#include "cellmimo/receiver.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cellmimo {

struct TauGrid
{
    double lo = 0.05;
    double hi = 20.0;
    double step = 0.05;

    std::vector<double> values() const;
    /// Parses "lo:hi:step".
    static TauGrid parse(const std::string& spec);
};

/// One Monte Carlo experiment: a fixed system, a list of antenna counts and a
/// number of trials per antenna count.
struct ExperimentConfig
{
    SystemParams params;             ///< params.N is ignored, see `antennas`
    bool radius_from_feasibility = true;  ///< ignore params.R and size the disk
    std::vector<int> antennas{16, 32, 64};
    std::size_t trials = 500;
    R0Mode r0_mode = UniformInOriginCell{};
    std::vector<CsiMode> modes{CsiMode::perfect, CsiMode::pilot_contaminated};
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out_dir = "out";
    double shortfall_target = 1e-6;
    /// Lower bound on n / N when the radius is chosen automatically.
    double min_load_ratio = 100.0;
    std::size_t rejection_cap = 1'000'000;
    std::size_t max_retries = 10;
    std::size_t bootstrap_resamples = 200;
    TauGrid tau_grid;
    LoadScaling scaling = LoadScaling::disk_geometry;

    void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

struct FeasibilityReport
{
    int N = 0;
    double rho = 0.0;
    double radius = 0.0;
    double expected_interferers = 0.0;   ///< pi rho R^2
    double shortfall_probability = 0.0;  ///< Pr(Poisson(pi rho R^2) < N)
    double recommended_radius = 0.0;     ///< smallest R meeting the target
    double target = 0.0;
    bool warning = false;
    std::string message;
};

/// Checks that the disk holds at least N active interferers with high
/// probability, modelling their count as Poisson(pi rho R^2).
FeasibilityReport feasibility_check(int N, double rho, double radius, double target = 1e-6);

/// Smallest radius with Pr(Poisson(pi rho R^2) < N) <= target.
double radius_for_shortfall(int N, double rho, double target);

void to_json(nlohmann::json& j, const FeasibilityReport& r);

/// Everything recorded for one trial. Samples follow the config's mode order
/// and share one realization and one fading draw.
struct TrialRecord
{
    std::size_t trial = 0;
    int N = 0;
    std::uint64_t seed = 0;  ///< substream seed of the attempt that succeeded
    std::size_t attempts = 1;
    double r0 = 0.0;
    std::size_t active_interferers = 0;
    std::size_t contaminators = 0;  ///< |T| - 1
    std::vector<SirSample> samples;
    /// Bounds on N^{-alpha/2} SIR; empty when the fixed point has no solution.
    std::optional<double> theorem2_bound;
    std::optional<double> pc_bound;
};

struct ModeSummary
{
    std::string mode;
    std::size_t samples = 0;
    double mean_gamma = 0.0;
    double mean_beta_N = 0.0;
    double q10 = 0.0;  ///< empirical 0.1-quantile of gamma
    double q10_ci_low = 0.0;
    double q10_ci_high = 0.0;

    friend bool operator==(const ModeSummary&, const ModeSummary&) = default;
};

struct AntennaSummary
{
    int N = 0;
    double load_ratio = 0.0;
    std::optional<double> beta;
    std::string beta_error;
    double beta_large_load = 0.0;
    double analytic_q10 = 0.0;  ///< se_quantile(0.1)
    std::optional<double> gamma_fixed_r0;  ///< gamma_approx for a fixed link length
    std::size_t completed = 0;
    std::size_t skipped = 0;
    std::size_t retries = 0;
    std::vector<ModeSummary> modes;
    std::optional<double> mean_pc_bound_gamma;
    std::optional<double> mean_theorem2_gamma;

    friend bool operator==(const AntennaSummary&, const AntennaSummary&) = default;
};

struct CampaignSummary
{
    std::string version;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    std::size_t trials = 0;
    double radius = 0.0;
    std::size_t mobiles = 0;
    double rho = 0.0;
    double p_active = 0.0;
    nlohmann::json config;
    std::vector<AntennaSummary> antennas;

    friend bool operator==(const CampaignSummary&, const CampaignSummary&) = default;
};

void to_json(nlohmann::json& j, const CampaignSummary& s);
void from_json(const nlohmann::json& j, CampaignSummary& s);

/// A staircase (x, Pr(X <= x)) table, x ascending.
struct CdfTable
{
    int N = 0;
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct CampaignResult
{
    ExperimentConfig config;
    CampaignSummary summary;
    std::vector<TrialRecord> trials;  ///< completed trials, ordered by (N, trial)
    std::vector<CdfTable> empirical;  ///< one per (N, mode)
    std::vector<CdfTable> analytic;   ///< se_cdf on the tau grid, one per N
};

/// Radius a config will actually use (explicit or feasibility-driven).
double campaign_radius(const ExperimentConfig& config, double rho);

CampaignResult run_campaign(const ExperimentConfig& config);

/// Type-1 empirical quantile (the ceil(p m)-th order statistic).
double empirical_quantile(std::vector<double> values, double p);

CdfTable empirical_cdf(std::vector<double> values, int N, std::string label);

struct OutputFormats
{
    bool csv = true;
    bool summary = true;
    bool cdf = true;
};

/// Per-trial rows, header included, exactly as written to trials.csv.
std::string trials_csv(const CampaignResult& result);

/// Writes trials.csv, summary.json and cdf_<N>_<label>.dat files under `dir`
/// and re-reads each CDF file to check it is sorted and non-decreasing.
/// Returns the written paths.
std::vector<std::filesystem::path> emit_outputs(const CampaignResult& result,
                                                const std::filesystem::path& dir,
                                                OutputFormats formats = {});

} // namespace cellmimo
