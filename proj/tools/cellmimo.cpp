// Command-line front end: analytic formulas, realization dumps and Monte Carlo campaigns.

#include "cellmimo/analytic.hpp"
#include "cellmimo/errors.hpp"
#include "cellmimo/geometry.hpp"
#include "cellmimo/harness.hpp"
#include "cellmimo/mac.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using nlohmann::json;
using namespace cellmimo;

namespace {

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("'" + path + "': " + e.what());
    }
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

std::optional<unsigned> workers_from_env()
{
    const char* env = std::getenv("CELLMIMO_WORKERS");
    if (!env || !*env)
        return std::nullopt;
    try {
        const long v = std::stol(env);
        if (v >= 1)
            return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ParameterError(std::string("CELLMIMO_WORKERS must be a positive integer, got '") + env +
                         "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Uplink massive-MIMO cellular network toolkit"};
    app.require_subcommand(1);

    // density
    double d_rho_c = 2e-5, d_rho_m = 1e-3;
    int d_k = 10;
    bool d_empirical = false;
    std::size_t d_trials = 200;
    std::uint64_t d_seed = 1;
    double d_radius = 2000.0;
    auto* density = app.add_subcommand("density", "Active interferer density rho");
    density->add_option("--rho-c", d_rho_c, "base-station density")->capture_default_str();
    density->add_option("--rho-m", d_rho_m, "mobile density")->capture_default_str();
    density->add_option("--k", d_k, "max active mobiles per cell")->capture_default_str();
    density->add_flag("--empirical", d_empirical, "also estimate by simulation");
    density->add_option("--trials", d_trials, "realizations for --empirical")->capture_default_str();
    density->add_option("--seed", d_seed)->capture_default_str();
    density->add_option("--radius", d_radius, "disk radius for --empirical")->capture_default_str();

    // analytic
    int a_n = 32;
    double a_alpha = 5.0, a_rho_c = 2e-5, a_rho_m = 1e-3, a_r0 = 100.0;
    int a_k = 10;
    double a_c = std::numeric_limits<double>::infinity();
    std::string a_grid = "0.05:20:0.05";
    std::string a_scaling = "disk_geometry";
    auto* analytic = app.add_subcommand("analytic", "Fixed point, spectral efficiency and CDF");
    analytic->add_option("--n-antennas", a_n)->capture_default_str();
    analytic->add_option("--alpha", a_alpha)->capture_default_str();
    analytic->add_option("--rho-c", a_rho_c)->capture_default_str();
    analytic->add_option("--rho-m", a_rho_m)->capture_default_str();
    analytic->add_option("--k", a_k)->capture_default_str();
    analytic->add_option("--r0", a_r0)->capture_default_str();
    analytic->add_option("--load-ratio", a_c, "c = n/N (default: infinite network)");
    analytic->add_option("--load-scaling", a_scaling)
        ->check(CLI::IsMember({"disk_geometry", "literal"}))
        ->capture_default_str();
    analytic->add_option("--tau-grid", a_grid, "lo:hi:step")->capture_default_str();

    // realize
    std::uint64_t r_seed = 1;
    double r_fixed = 0.0;
    SystemParams r_p;
    auto* realize = app.add_subcommand("realize", "Sample one network realization as JSON");
    realize->add_option("--rho-c", r_p.rho_c)->capture_default_str();
    realize->add_option("--rho-m", r_p.rho_m)->capture_default_str();
    realize->add_option("--k", r_p.K)->capture_default_str();
    realize->add_option("--alpha", r_p.alpha)->capture_default_str();
    realize->add_option("--n-antennas", r_p.N)->capture_default_str();
    realize->add_option("--radius", r_p.R)->capture_default_str();
    realize->add_option("--r0", r_fixed, "fixed link length (default: uniform in cell)");
    realize->add_option("--seed", r_seed)->capture_default_str();

    // pc-bound
    std::string b_file;
    std::optional<double> b_beta;
    bool b_no_tail = false;
    auto* pcb = app.add_subcommand("pc-bound", "Pilot-contamination lower bound for a realization");
    pcb->add_option("realization", b_file, "realization JSON ('-' for stdin)")->required();
    pcb->add_option("--beta", b_beta, "override the fixed-point beta");
    pcb->add_flag("--no-tail", b_no_tail, "drop the correction for stations beyond R");

    // simulate
    std::string s_config;
    std::optional<std::uint64_t> s_seed;
    std::optional<unsigned> s_workers;
    std::optional<std::string> s_out;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo campaign");
    simulate->add_option("--config", s_config, "campaign config JSON")->required();
    simulate->add_option("--seed", s_seed);
    simulate->add_option("--workers", s_workers, "worker threads (env CELLMIMO_WORKERS)");
    simulate->add_option("--out", s_out, "output directory");

    // feasibility
    int f_n = 64;
    double f_rho = 0.0, f_radius = 2000.0, f_target = 1e-6;
    auto* feas = app.add_subcommand("feasibility", "Chance of fewer active interferers than antennas");
    feas->add_option("--n-antennas", f_n)->capture_default_str();
    feas->add_option("--rho", f_rho, "active density (default: K=10 reference system)");
    feas->add_option("--radius", f_radius)->capture_default_str();
    feas->add_option("--target", f_target)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (density->parsed()) {
            const auto d = active_density_analytic(d_rho_c, d_rho_m, d_k);
            json out{{"p_active", d.p_active},
                     {"rho", d.rho},
                     {"quadrature_error", d.error_estimate},
                     {"ci", nullptr}};
            if (d_empirical) {
                SystemParams p;
                p.rho_c = d_rho_c;
                p.rho_m = d_rho_m;
                p.K = d_k;
                p.R = d_radius;
                p.N = 1;
                Rng rng = make_rng(d_seed);
                std::vector<NetworkRealization> reals;
                reals.reserve(d_trials);
                for (std::size_t t = 0; t < d_trials; ++t)
                    reals.push_back(build_realization(p, UniformInOriginCell{}, rng));
                const auto f = empirical_active_fraction(reals, d_k, rng);
                out["empirical"] = {{"p_active", f.fraction},
                                    {"rho", f.fraction * d_rho_m},
                                    {"mobiles", f.mobiles},
                                    {"realizations", f.realizations}};
                out["ci"] = {f.ci_low * d_rho_m, f.ci_high * d_rho_m};
            }
            print(out);
        } else if (analytic->parsed()) {
            const auto d = active_density_analytic(a_rho_c, a_rho_m, a_k);
            const auto grid = TauGrid::parse(a_grid);
            FixedPointInput in{d.rho, a_c, a_alpha, a_rho_m,
                               a_scaling == "literal" ? LoadScaling::literal
                                                         : LoadScaling::disk_geometry};
            json out{{"rho", d.rho},
                     {"p_active", d.p_active},
                     {"c", std::isinf(a_c) ? json(nullptr) : json(a_c)},
                     {"beta_large_load", beta_large_load(d.rho, a_alpha)},
                     {"gamma", gamma_approx(a_n, a_alpha, d.rho, a_r0)},
                     {"q10", se_quantile(0.1, a_n, a_alpha, d.rho, a_rho_c)}};
            try {
                const auto sol = solve_beta(in);
                out["beta"] = sol.beta;
                out["beta_residual"] = sol.relative_residual;
                out["beta_sign_changes"] = sol.sign_changes;
            } catch (const NoSolutionError& e) {
                out["beta"] = nullptr;
                out["beta_error"] = e.what();
            }
            auto cdf = json::array();
            for (double tau : grid.values())
                cdf.push_back({tau, se_cdf(tau, a_n, a_alpha, d.rho, a_rho_c)});
            out["cdf"] = cdf;
            print(out);
        } else if (realize->parsed()) {
            Rng rng = make_rng(r_seed);
            R0Mode mode = UniformInOriginCell{};
            if (r_fixed > 0.0)
                mode = FixedLinkLength{r_fixed};
            auto real = build_realization(r_p, mode, rng);
            real.seed = r_seed;
            std::cout << json(real).dump() << '\n';
        } else if (pcb->parsed()) {
            const json j = b_file == "-" ? json::parse(std::cin) : read_json_file(b_file);
            const auto real = j.get<NetworkRealization>();
            const auto& p = real.params;
            p.validate();
            double beta = 0.0;
            double rho = 0.0;
            if (b_beta) {
                beta = *b_beta;
            } else {
                rho = active_density_analytic(p.rho_c, p.rho_m, p.K).rho;
                beta = solve_beta({rho, p.load_ratio(), p.alpha, p.rho_m}).beta;
            }
            std::vector<double> dist;
            for (std::size_t k = 1; k < real.base_stations.size(); ++k)
                dist.push_back(norm(real.base_stations[k]));
            std::optional<TailCorrection> tail;
            if (!b_no_tail)
                tail = TailCorrection{p.rho_c, p.R};
            const double r0 = real.r0();
            const double bound = pc_beta_lower_bound(r0, dist, beta, p.alpha, tail);
            json out{{"r0", r0},
                     {"beta", beta},
                     {"base_stations", real.base_stations.size()},
                     {"bound", bound},
                     {"normalized_sir_bound", bound * std::pow(r0, p.alpha)},
                     {"spectral_efficiency_bound", bound_spectral_efficiency(bound, p.N, p.alpha)}};
            if (rho > 0.0)
                out["rho"] = rho;
            print(out);
        } else if (simulate->parsed()) {
            auto config = read_json_file(s_config).get<ExperimentConfig>();
            if (auto w = workers_from_env())
                config.workers = *w;
            if (s_workers)
                config.workers = *s_workers;
            if (s_seed)
                config.seed = *s_seed;
            if (s_out)
                config.out_dir = *s_out;
            config.validate();

            const auto rho =
                active_density_analytic(config.params.rho_c, config.params.rho_m, config.params.K).rho;
            const double radius = campaign_radius(config, rho);
            for (int N : config.antennas) {
                const auto f = feasibility_check(N, rho, radius, config.shortfall_target);
                if (f.warning)
                    std::clog << "warning: N = " << N << ": " << f.message << '\n';
            }
            const auto result = run_campaign(config);
            const auto files = emit_outputs(result, config.out_dir);
            for (const auto& a : result.summary.antennas) {
                std::clog << "N = " << a.N << ": " << a.completed << " trials, " << a.skipped
                          << " skipped";
                for (const auto& m : a.modes)
                    std::clog << ", " << m.mode << " q10 = " << m.q10;
                std::clog << ", analytic q10 = " << a.analytic_q10 << '\n';
            }
            json out{{"out_dir", config.out_dir}, {"wall_time_s", result.summary.wall_time_s}};
            auto list = json::array();
            for (const auto& f : files)
                list.push_back(f.string());
            out["files"] = list;
            print(out);
        } else if (feas->parsed()) {
            if (!(f_rho > 0.0))
                f_rho = active_density_analytic(2e-5, 1e-3, 10).rho;
            print(json(feasibility_check(f_n, f_rho, f_radius, f_target)));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
