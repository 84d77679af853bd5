#include "cellmimo/harness.hpp"

#include "cellmimo/errors.hpp"
#include "cellmimo/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#ifndef CELLMIMO_VERSION
#define CELLMIMO_VERSION "cellmimo-unknown"
#endif

namespace cellmimo {

// ---------------------------------------------------------------------------
// Config

std::vector<double> TauGrid::values() const
{
    std::vector<double> out;
    if (!(step > 0.0) || hi < lo)
        throw ParameterError("TauGrid: need step > 0 and hi >= lo");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

TauGrid TauGrid::parse(const std::string& spec)
{
    TauGrid g;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(spec);
    if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':')
        throw ParameterError("tau grid must look like lo:hi:step, got '" + spec + "'");
    if (!(g.lo > 0.0))
        throw ParameterError("tau grid: lo must be positive");
    g.values();
    return g;
}

void ExperimentConfig::validate() const
{
    SystemParams p = params;
    p.N = antennas.empty() ? 1 : *std::max_element(antennas.begin(), antennas.end());
    p.validate();
    if (antennas.empty())
        throw ParameterError("config: antenna list is empty");
    for (int n : antennas)
        if (n < 1)
            throw ParameterError("config: antenna counts must be >= 1");
    if (trials < 1)
        throw ParameterError("config: trials must be >= 1");
    if (modes.empty())
        throw ParameterError("config: no CSI modes requested");
    if (!(shortfall_target > 0.0 && shortfall_target < 1.0))
        throw ParameterError("config: shortfall_target must lie in (0, 1)");
    if (const auto* f = std::get_if<FixedLinkLength>(&r0_mode); f && !(f->r0 > 0.0))
        throw ParameterError("config: fixed r0 must be positive");
    tau_grid.values();
}

void to_json(nlohmann::json& j, const ExperimentConfig& c)
{
    nlohmann::json r0;
    if (const auto* f = std::get_if<FixedLinkLength>(&c.r0_mode))
        r0 = {{"fixed", f->r0}};
    else
        r0 = "uniform";
    std::vector<std::string> modes;
    for (auto m : c.modes)
        modes.emplace_back(to_string(m));

    j = nlohmann::json{
        {"rho_c", c.params.rho_c},
        {"rho_m", c.params.rho_m},
        {"K", c.params.K},
        {"alpha", c.params.alpha},
        {"antennas", c.antennas},
        {"trials", c.trials},
        {"r0_mode", r0},
        {"csi_modes", modes},
        {"seed", c.seed},
        {"workers", c.workers},
        {"out_dir", c.out_dir},
        {"shortfall_target", c.shortfall_target},
        {"min_load_ratio", c.min_load_ratio},
        {"rejection_cap", c.rejection_cap},
        {"max_retries", c.max_retries},
        {"bootstrap_resamples", c.bootstrap_resamples},
        {"tau_grid", {{"lo", c.tau_grid.lo}, {"hi", c.tau_grid.hi}, {"step", c.tau_grid.step}}},
        {"load_scaling", c.scaling == LoadScaling::literal ? "literal" : "disk_geometry"},
    };
    if (!c.radius_from_feasibility)
        j["R"] = c.params.R;
}

void from_json(const nlohmann::json& j, ExperimentConfig& c)
{
    ExperimentConfig d;
    c = d;
    c.params.rho_c = j.value("rho_c", d.params.rho_c);
    c.params.rho_m = j.value("rho_m", d.params.rho_m);
    c.params.K = j.value("K", d.params.K);
    c.params.alpha = j.value("alpha", d.params.alpha);
    if (j.contains("R") && !j.at("R").is_null()) {
        c.params.R = j.at("R").get<double>();
        c.radius_from_feasibility = false;
    }
    c.antennas = j.value("antennas", d.antennas);
    c.trials = j.value("trials", d.trials);
    if (j.contains("r0_mode")) {
        const auto& m = j.at("r0_mode");
        if (m.is_string() && m.get<std::string>() == "uniform")
            c.r0_mode = UniformInOriginCell{};
        else if (m.is_object() && m.contains("fixed"))
            c.r0_mode = FixedLinkLength{m.at("fixed").get<double>()};
        else
            throw ParameterError("config: r0_mode must be \"uniform\" or {\"fixed\": r0}");
    }
    if (j.contains("csi_modes")) {
        c.modes.clear();
        for (const auto& m : j.at("csi_modes"))
            c.modes.push_back(csi_mode_from_string(m.get<std::string>()));
    }
    c.seed = j.value("seed", d.seed);
    c.workers = j.value("workers", d.workers);
    c.out_dir = j.value("out_dir", d.out_dir);
    c.shortfall_target = j.value("shortfall_target", d.shortfall_target);
    c.min_load_ratio = j.value("min_load_ratio", d.min_load_ratio);
    c.rejection_cap = j.value("rejection_cap", d.rejection_cap);
    c.max_retries = j.value("max_retries", d.max_retries);
    c.bootstrap_resamples = j.value("bootstrap_resamples", d.bootstrap_resamples);
    if (j.contains("tau_grid")) {
        const auto& g = j.at("tau_grid");
        if (g.is_string()) {
            c.tau_grid = TauGrid::parse(g.get<std::string>());
        } else {
            c.tau_grid.lo = g.value("lo", d.tau_grid.lo);
            c.tau_grid.hi = g.value("hi", d.tau_grid.hi);
            c.tau_grid.step = g.value("step", d.tau_grid.step);
        }
    }
    const std::string scaling = j.value("load_scaling", std::string("disk_geometry"));
    if (scaling == "literal")
        c.scaling = LoadScaling::literal;
    else if (scaling == "disk_geometry")
        c.scaling = LoadScaling::disk_geometry;
    else
        throw ParameterError("config: unknown load_scaling '" + scaling + "'");
}

// ---------------------------------------------------------------------------
// Feasibility

double radius_for_shortfall(int N, double rho, double target)
{
    if (N < 1 || !(rho > 0.0) || !(target > 0.0 && target < 1.0))
        throw ParameterError("radius_for_shortfall: invalid arguments");
    // Pr(X <= N-1) = Q(N, mu) for X ~ Poisson(mu); solve Q(N, mu) = target.
    const double mu = boost::math::gamma_q_inv(static_cast<double>(N), target);
    return std::sqrt(mu / (std::numbers::pi * rho));
}

FeasibilityReport feasibility_check(int N, double rho, double radius, double target)
{
    if (N < 1 || !(rho > 0.0) || !(radius > 0.0))
        throw ParameterError("feasibility_check: N, rho and radius must be positive");
    FeasibilityReport r;
    r.N = N;
    r.rho = rho;
    r.radius = radius;
    r.target = target;
    r.expected_interferers = std::numbers::pi * rho * radius * radius;
    r.shortfall_probability = boost::math::gamma_q(static_cast<double>(N), r.expected_interferers);
    r.recommended_radius = radius_for_shortfall(N, rho, target);
    std::ostringstream msg;
    if (r.expected_interferers < N) {
        r.warning = true;
        msg << "expected " << r.expected_interferers << " active interferers for " << N
            << " antennas; covariance will usually be singular";
    } else if (r.shortfall_probability > target * (1.0 + 1e-9)) {
        r.warning = true;
        msg << "shortfall probability " << r.shortfall_probability << " exceeds target " << target;
    } else {
        msg << "ok";
    }
    if (r.warning)
        msg << " (recommended R >= " << r.recommended_radius << ")";
    r.message = msg.str();
    return r;
}

void to_json(nlohmann::json& j, const FeasibilityReport& r)
{
    j = nlohmann::json{{"N", r.N},
                       {"rho", r.rho},
                       {"R", r.radius},
                       {"expected_interferers", r.expected_interferers},
                       {"shortfall_probability", r.shortfall_probability},
                       {"recommended_radius", r.recommended_radius},
                       {"target", r.target},
                       {"warning", r.warning},
                       {"message", r.message}};
}

// ---------------------------------------------------------------------------
// Summary serialization

namespace {

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> opt_double(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace

void to_json(nlohmann::json& j, const CampaignSummary& s)
{
    auto antennas = nlohmann::json::array();
    for (const auto& a : s.antennas) {
        auto modes = nlohmann::json::array();
        for (const auto& m : a.modes)
            modes.push_back({{"mode", m.mode},
                             {"samples", m.samples},
                             {"mean_gamma", m.mean_gamma},
                             {"mean_beta_N", m.mean_beta_N},
                             {"q10", m.q10},
                             {"q10_ci_low", m.q10_ci_low},
                             {"q10_ci_high", m.q10_ci_high}});
        antennas.push_back({{"N", a.N},
                            {"load_ratio", a.load_ratio},
                            {"beta", opt_json(a.beta)},
                            {"beta_error", a.beta_error},
                            {"beta_large_load", a.beta_large_load},
                            {"analytic_q10", a.analytic_q10},
                            {"gamma_fixed_r0", opt_json(a.gamma_fixed_r0)},
                            {"completed", a.completed},
                            {"skipped", a.skipped},
                            {"retries", a.retries},
                            {"modes", modes},
                            {"mean_pc_bound_gamma", opt_json(a.mean_pc_bound_gamma)},
                            {"mean_theorem2_gamma", opt_json(a.mean_theorem2_gamma)}});
    }
    j = nlohmann::json{{"version", s.version},
                       {"seed", s.seed},
                       {"wall_time_s", s.wall_time_s},
                       {"trials", s.trials},
                       {"R", s.radius},
                       {"mobiles", s.mobiles},
                       {"rho", s.rho},
                       {"p_active", s.p_active},
                       {"config", s.config},
                       {"antennas", antennas}};
}

void from_json(const nlohmann::json& j, CampaignSummary& s)
{
    s.version = j.at("version").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.wall_time_s = j.at("wall_time_s").get<double>();
    s.trials = j.at("trials").get<std::size_t>();
    s.radius = j.at("R").get<double>();
    s.mobiles = j.at("mobiles").get<std::size_t>();
    s.rho = j.at("rho").get<double>();
    s.p_active = j.at("p_active").get<double>();
    s.config = j.at("config");
    s.antennas.clear();
    for (const auto& a : j.at("antennas")) {
        AntennaSummary out;
        out.N = a.at("N").get<int>();
        out.load_ratio = a.at("load_ratio").get<double>();
        out.beta = opt_double(a, "beta");
        out.beta_error = a.at("beta_error").get<std::string>();
        out.beta_large_load = a.at("beta_large_load").get<double>();
        out.analytic_q10 = a.at("analytic_q10").get<double>();
        out.gamma_fixed_r0 = opt_double(a, "gamma_fixed_r0");
        out.completed = a.at("completed").get<std::size_t>();
        out.skipped = a.at("skipped").get<std::size_t>();
        out.retries = a.at("retries").get<std::size_t>();
        for (const auto& m : a.at("modes")) {
            ModeSummary ms;
            ms.mode = m.at("mode").get<std::string>();
            ms.samples = m.at("samples").get<std::size_t>();
            ms.mean_gamma = m.at("mean_gamma").get<double>();
            ms.mean_beta_N = m.at("mean_beta_N").get<double>();
            ms.q10 = m.at("q10").get<double>();
            ms.q10_ci_low = m.at("q10_ci_low").get<double>();
            ms.q10_ci_high = m.at("q10_ci_high").get<double>();
            out.modes.push_back(ms);
        }
        out.mean_pc_bound_gamma = opt_double(a, "mean_pc_bound_gamma");
        out.mean_theorem2_gamma = opt_double(a, "mean_theorem2_gamma");
        s.antennas.push_back(std::move(out));
    }
}

// ---------------------------------------------------------------------------
// Statistics helpers

double empirical_quantile(std::vector<double> values, double p)
{
    if (values.empty())
        throw ParameterError("empirical_quantile: no values");
    if (!(p > 0.0 && p <= 1.0))
        throw ParameterError("empirical_quantile: p must lie in (0, 1]");
    const auto m = values.size();
    auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(m) - 1e-12));
    k = std::clamp<std::size_t>(k, 1, m);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     values.end());
    return values[k - 1];
}

CdfTable empirical_cdf(std::vector<double> values, int N, std::string label)
{
    std::sort(values.begin(), values.end());
    CdfTable t;
    t.N = N;
    t.label = std::move(label);
    const auto m = static_cast<double>(values.size());
    t.points.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        t.points.emplace_back(values[i], static_cast<double>(i + 1) / m);
    return t;
}

namespace {

std::pair<double, double> bootstrap_quantile_ci(const std::vector<double>& values, double p,
                                                std::size_t resamples, std::uint64_t seed)
{
    if (values.size() < 2 || resamples == 0) {
        const double q = values.empty() ? 0.0 : empirical_quantile(values, p);
        return {q, q};
    }
    Rng rng = make_rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    std::vector<double> qs;
    qs.reserve(resamples);
    std::vector<double> sample(values.size());
    for (std::size_t b = 0; b < resamples; ++b) {
        for (auto& s : sample)
            s = values[pick(rng)];
        qs.push_back(empirical_quantile(sample, p));
    }
    return {empirical_quantile(qs, 0.025), empirical_quantile(qs, 0.975)};
}

struct AntennaContext
{
    SystemParams params;  ///< with N and R set
    std::optional<double> beta;
};

struct TrialOutcome
{
    std::optional<TrialRecord> record;
    std::size_t retries = 0;
};

TrialOutcome run_trial(const ExperimentConfig& config, const AntennaContext& ctx, std::size_t trial)
{
    const SystemParams& p = ctx.params;
    const RealizationOptions options{config.rejection_cap};

    TrialOutcome outcome;
    for (std::size_t attempt = 0; attempt <= config.max_retries; ++attempt) {
        const std::uint64_t seed =
            substream_seed(config.seed, static_cast<std::uint64_t>(p.N), trial, attempt);
        Rng rng = make_rng(seed);
        try {
            const auto real = build_realization(p, config.r0_mode, rng, options);
            const auto act = activate(real, p.K, rng);
            const auto pilots = assign_pilots(act, real, p.K, rng);
            const auto channels = sample_channels(act, p.N, rng);
            const auto interferers = active_interferers(real, channels);
            const auto R = build_covariance(interferers, p.alpha);

            TrialRecord rec;
            rec.trial = trial;
            rec.N = p.N;
            rec.seed = seed;
            rec.attempts = attempt + 1;
            rec.r0 = real.r0();
            rec.active_interferers = interferers.active();
            rec.contaminators = pilots.contamination_set.size() - 1;

            const ComplexVector g0 = channels.column(0);
            for (const CsiMode mode : config.modes) {
                const auto est =
                    estimate_channel(mode, pilots.contamination_set, real, channels, p.alpha);
                const auto sol = mmse_weight(est.hhat, R);
                auto s = output_sir(sol.w, g0, rec.r0, interferers, p.alpha, mode);
                s.seed = seed;
                rec.samples.push_back(s);
            }

            if (ctx.beta) {
                std::vector<double> bs;
                bs.reserve(real.base_stations.size());
                for (std::size_t j = 1; j < real.base_stations.size(); ++j)
                    bs.push_back(norm(real.base_stations[j]));
                rec.pc_bound = pc_beta_lower_bound(rec.r0, bs, *ctx.beta, p.alpha,
                                                     TailCorrection{p.rho_c, p.R});
                std::vector<double> contaminators;
                for (std::size_t k = 1; k < pilots.contamination_set.size(); ++k)
                    contaminators.push_back(norm(real.mobiles[pilots.contamination_set[k]]));
                rec.theorem2_bound =
                    theorem2_bound_per_realization(rec.r0, contaminators, *ctx.beta, p.alpha);
            }
            outcome.record = std::move(rec);
            return outcome;
        } catch (const SingularCovarianceError&) {
        } catch (const NumericError&) {
        } catch (const DegenerateRealizationError&) {
        }
        ++outcome.retries;
    }
    return outcome;
}

double mean_of(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

double campaign_radius(const ExperimentConfig& config, double rho)
{
    if (!config.radius_from_feasibility)
        return config.params.R;
    const int n_max = *std::max_element(config.antennas.begin(), config.antennas.end());
    const double r_feasible = radius_for_shortfall(n_max, rho, config.shortfall_target);
    const double r_load =
        std::sqrt(config.min_load_ratio * n_max / (std::numbers::pi * config.params.rho_m));
    return std::max(r_feasible, r_load);
}

CampaignResult run_campaign(const ExperimentConfig& config)
{
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();

    CampaignResult result;
    result.config = config;

    const auto density = active_density_analytic(config.params.rho_c, config.params.rho_m,
                                                 config.params.K);
    const double radius = campaign_radius(config, density.rho);

    auto& summary = result.summary;
    summary.version = CELLMIMO_VERSION;
    summary.seed = config.seed;
    summary.trials = config.trials;
    summary.radius = radius;
    summary.rho = density.rho;
    summary.p_active = density.p_active;
    {
        ExperimentConfig echoed = config;
        echoed.params.R = radius;
        echoed.radius_from_feasibility = false;
        summary.config = echoed;
    }

    const auto taus = config.tau_grid.values();
    const unsigned workers = std::max(1u, config.workers);

    for (const int N : config.antennas) {
        AntennaContext ctx;
        ctx.params = config.params;
        ctx.params.N = N;
        ctx.params.R = radius;
        summary.mobiles = ctx.params.mobile_count();

        AntennaSummary as;
        as.N = N;
        as.load_ratio = ctx.params.load_ratio();
        as.beta_large_load = beta_large_load(density.rho, ctx.params.alpha);
        as.analytic_q10 = se_quantile(0.1, N, ctx.params.alpha, density.rho, ctx.params.rho_c);
        if (const auto* f = std::get_if<FixedLinkLength>(&config.r0_mode))
            as.gamma_fixed_r0 = gamma_approx(N, ctx.params.alpha, density.rho, f->r0);
        try {
            FixedPointInput in{density.rho, as.load_ratio, ctx.params.alpha, ctx.params.rho_m,
                               config.scaling};
            ctx.beta = solve_beta(in).beta;
            as.beta = ctx.beta;
        } catch (const NoSolutionError& e) {
            as.beta_error = e.what();
        } catch (const NumericError& e) {
            as.beta_error = e.what();
        }

        std::vector<TrialOutcome> outcomes(config.trials);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= config.trials)
                    return;
                try {
                    outcomes[t] = run_trial(config, ctx, t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(config.trials);
                    return;
                }
            }
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(work);
            for (auto& th : pool)
                th.join();
        }
        if (failure)
            std::rethrow_exception(failure);

        // Ordered reduce by trial index.
        std::vector<std::vector<double>> gammas(config.modes.size());
        std::vector<std::vector<double>> betas(config.modes.size());
        std::vector<double> pc_bounds;
        std::vector<double> thm2;
        for (auto& o : outcomes) {
            as.retries += o.retries;
            if (!o.record) {
                ++as.skipped;
                continue;
            }
            ++as.completed;
            for (std::size_t m = 0; m < config.modes.size(); ++m) {
                gammas[m].push_back(o.record->samples[m].gamma);
                betas[m].push_back(o.record->samples[m].beta_N);
            }
            if (o.record->pc_bound)
                pc_bounds.push_back(
                    bound_spectral_efficiency(*o.record->pc_bound, N, ctx.params.alpha));
            if (o.record->theorem2_bound)
                thm2.push_back(
                    bound_spectral_efficiency(*o.record->theorem2_bound, N, ctx.params.alpha));
            result.trials.push_back(std::move(*o.record));
        }

        for (std::size_t m = 0; m < config.modes.size(); ++m) {
            ModeSummary ms;
            ms.mode = std::string(to_string(config.modes[m]));
            ms.samples = gammas[m].size();
            if (!gammas[m].empty()) {
                ms.mean_gamma = mean_of(gammas[m]);
                ms.mean_beta_N = mean_of(betas[m]);
                ms.q10 = empirical_quantile(gammas[m], 0.1);
                const auto [lo, hi] = bootstrap_quantile_ci(
                    gammas[m], 0.1, config.bootstrap_resamples,
                    substream_seed(config.seed, static_cast<std::uint64_t>(N), m, 0xB0075742ULL));
                ms.q10_ci_low = lo;
                ms.q10_ci_high = hi;
            }
            as.modes.push_back(ms);
            result.empirical.push_back(empirical_cdf(gammas[m], N, ms.mode));
        }
        if (!pc_bounds.empty())
            as.mean_pc_bound_gamma = mean_of(pc_bounds);
        if (!thm2.empty())
            as.mean_theorem2_gamma = mean_of(thm2);

        CdfTable analytic;
        analytic.N = N;
        analytic.label = "analytic";
        for (const double tau : taus)
            analytic.points.emplace_back(
                tau, se_cdf(tau, N, ctx.params.alpha, density.rho, ctx.params.rho_c));
        result.analytic.push_back(std::move(analytic));

        summary.antennas.push_back(std::move(as));
    }

    summary.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string cdf_contents(const CdfTable& t)
{
    std::string s = "# N=" + std::to_string(t.N) + " " + t.label + "\n# tau cdf\n";
    for (const auto& [x, p] : t.points)
        s += fmt_double(x) + " " + fmt_double(p) + "\n";
    return s;
}

void validate_cdf_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot re-open '" + path.string() + "' for validation");
    std::string line;
    double last_x = -std::numeric_limits<double>::infinity();
    double last_p = 0.0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream row(line);
        double x = 0.0;
        double p = 0.0;
        if (!(row >> x >> p))
            throw std::runtime_error("malformed row in '" + path.string() + "': " + line);
        if (x < last_x || p < last_p || p < 0.0 || p > 1.0)
            throw std::runtime_error("CDF file '" + path.string() + "' is not monotone at: " + line);
        last_x = x;
        last_p = p;
    }
}

} // namespace

std::string trials_csv(const CampaignResult& result)
{
    std::string s = "seed,mode,r_0,N,sir,beta_N,gamma,active_count\n";
    for (const auto& rec : result.trials)
        for (const auto& smp : rec.samples) {
            s += std::to_string(smp.seed);
            s += ',';
            s += to_string(smp.mode);
            s += ',' + fmt_double(smp.r0);
            s += ',' + std::to_string(smp.N);
            s += ',' + fmt_double(smp.sir);
            s += ',' + fmt_double(smp.beta_N);
            s += ',' + fmt_double(smp.gamma);
            s += ',' + std::to_string(smp.active_count);
            s += '\n';
        }
    return s;
}

std::vector<std::filesystem::path> emit_outputs(const CampaignResult& result,
                                                const std::filesystem::path& dir,
                                                OutputFormats formats)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir.string() +
                                 "': " + ec.message());

    std::vector<std::filesystem::path> written;
    if (formats.csv) {
        const auto path = dir / "trials.csv";
        write_file(path, trials_csv(result));
        written.push_back(path);
    }
    if (formats.summary) {
        const auto path = dir / "summary.json";
        write_file(path, nlohmann::json(result.summary).dump(2) + "\n");
        written.push_back(path);
    }
    if (formats.cdf) {
        auto emit = [&](const CdfTable& t) {
            const auto path = dir / ("cdf_" + std::to_string(t.N) + "_" + t.label + ".dat");
            write_file(path, cdf_contents(t));
            validate_cdf_file(path);
            written.push_back(path);
        };
        for (const auto& t : result.empirical)
            emit(t);
        for (const auto& t : result.analytic)
            emit(t);
    }
    return written;
}

} // namespace cellmimo
