#include "cellmimo/errors.hpp"
#include "cellmimo/harness.hpp"

#include <boost/math/distributions/poisson.hpp>
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cellmimo;

namespace {

ExperimentConfig tiny_config()
{
    ExperimentConfig c;
    c.params.R = 700.0;
    c.radius_from_feasibility = false;
    c.antennas = {4, 8};
    c.trials = 12;
    c.seed = 99;
    c.bootstrap_resamples = 50;
    return c;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("cellmimo_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_SUITE("harness")
{
    TEST_CASE("tau grid parsing")
    {
        const auto g = TauGrid::parse("0.5:2:0.5");
        CHECK(g.values() == std::vector<double>{0.5, 1.0, 1.5, 2.0});
        CHECK(TauGrid::parse("0.1:0.3:0.1").values().size() == 3);
        CHECK_THROWS_AS(TauGrid::parse("1-2-3"), ParameterError);
        CHECK_THROWS_AS(TauGrid::parse("0:2:0.5"), ParameterError);
        CHECK_THROWS_AS(TauGrid::parse("1:2:0"), ParameterError);
    }

    TEST_CASE("feasibility: reference system")
    {
        const auto r = feasibility_check(100, 2e-4, 2000.0);
        CHECK(r.expected_interferers == doctest::Approx(2513.27).epsilon(1e-5));
        CHECK(r.shortfall_probability < 1e-300);
        CHECK_FALSE(r.warning);

        const auto bad = feasibility_check(100, 2e-4, 300.0);
        CHECK(bad.expected_interferers < 100);
        CHECK(bad.warning);
        CHECK(bad.message.find("recommended") != std::string::npos);
    }

    TEST_CASE("feasibility: recommended radius meets its target")
    {
        for (int N : {8, 32, 100})
            for (double target : {1e-3, 1e-6, 1e-9}) {
                const double R = radius_for_shortfall(N, 2e-4, target);
                const double mu = 2e-4 * std::numbers::pi * R * R;
                // Independent tail: Boost's Poisson distribution.
                const double tail = boost::math::cdf(boost::math::poisson_distribution<>(mu), N - 1);
                CHECK(tail == doctest::Approx(target).epsilon(1e-8));
                CHECK_FALSE(feasibility_check(N, 2e-4, R, target).warning);
                CHECK(feasibility_check(N, 2e-4, 0.9 * R, target).warning);
            }
    }

    TEST_CASE("empirical quantile is an order statistic")
    {
        const std::vector<double> v{5, 1, 4, 2, 3, 10, 9, 8, 7, 6};
        CHECK(empirical_quantile(v, 0.1) == 1);
        CHECK(empirical_quantile(v, 0.11) == 2);
        CHECK(empirical_quantile(v, 0.5) == 5);
        CHECK(empirical_quantile(v, 1.0) == 10);
        CHECK_THROWS_AS(empirical_quantile({}, 0.5), ParameterError);
    }

    TEST_CASE("config JSON round trip")
    {
        auto c = tiny_config();
        c.r0_mode = FixedLinkLength{75.0};
        c.modes = {CsiMode::pilot_contaminated};
        c.scaling = LoadScaling::literal;
        const nlohmann::json j = c;
        const auto back = j.get<ExperimentConfig>();
        CHECK(nlohmann::json(back) == j);
        CHECK(std::get<FixedLinkLength>(back.r0_mode).r0 == 75.0);
        CHECK_FALSE(back.radius_from_feasibility);

        const auto defaults = nlohmann::json::object().get<ExperimentConfig>();
        CHECK(defaults.radius_from_feasibility);
        CHECK(defaults.antennas == std::vector<int>{16, 32, 64});
        CHECK(defaults.trials == 500);
        CHECK(std::holds_alternative<UniformInOriginCell>(defaults.r0_mode));

        CHECK_THROWS_AS(nlohmann::json({{"r0_mode", "nearest"}}).get<ExperimentConfig>(), ParameterError);
        CHECK_THROWS_AS(nlohmann::json({{"csi_modes", {"ideal"}}}).get<ExperimentConfig>(), ParameterError);
        auto zero = tiny_config();
        zero.trials = 0;
        CHECK_THROWS_AS(zero.validate(), ParameterError);
    }

    TEST_CASE("campaign: paired modes, counts and ordering")
    {
        const auto result = run_campaign(tiny_config());
        CHECK(result.trials.size() == 24);
        for (std::size_t i = 0; i < result.trials.size(); ++i) {
            const auto& t = result.trials[i];
            CHECK(t.trial == i % 12);
            CHECK(t.N == (i < 12 ? 4 : 8));
            REQUIRE(t.samples.size() == 2);
            CHECK(t.samples[0].mode == CsiMode::perfect);
            CHECK(t.samples[1].mode == CsiMode::pilot_contaminated);
            CHECK(t.samples[0].r0 == t.samples[1].r0);
            CHECK(t.samples[0].seed == t.samples[1].seed);
            CHECK(t.samples[1].sir <= t.samples[0].sir * (1 + 1e-9));
            REQUIRE(t.theorem2_bound.has_value());
            REQUIRE(t.pc_bound.has_value());
            CHECK(*t.theorem2_bound >= *t.pc_bound);
        }
        REQUIRE(result.summary.antennas.size() == 2);
        for (const auto& a : result.summary.antennas) {
            CHECK(a.completed == 12);
            CHECK(a.skipped == 0);
            CHECK(a.beta.has_value());
            CHECK(a.modes.size() == 2);
        }
        CHECK(result.empirical.size() == 4);
        CHECK(result.analytic.size() == 2);
        for (const auto& t : result.empirical)
            for (std::size_t k = 1; k < t.points.size(); ++k) {
                CHECK(t.points[k].first >= t.points[k - 1].first);
                CHECK(t.points[k].second > t.points[k - 1].second);
            }
    }

    TEST_CASE("campaign output does not depend on the worker count")
    {
        auto c = tiny_config();
        const auto one = trials_csv(run_campaign(c));
        c.workers = 3;
        const auto three = trials_csv(run_campaign(c));
        CHECK(one == three);
        c.seed = 100;
        CHECK(trials_csv(run_campaign(c)) != one);
    }

    TEST_CASE("singular trials are retried and then skipped")
    {
        auto c = tiny_config();
        c.params.R = 40.0;  // five mobiles: never 8 interferers
        c.antennas = {8};
        c.trials = 3;
        c.max_retries = 2;
        const auto result = run_campaign(c);
        CHECK(result.trials.empty());
        CHECK(result.summary.antennas[0].skipped == 3);
        CHECK(result.summary.antennas[0].retries == 9);
        CHECK(trials_csv(result) == "seed,mode,r_0,N,sir,beta_N,gamma,active_count\n");
    }

    TEST_CASE("outputs: files, summary round trip and CDF validation")
    {
        const auto result = run_campaign(tiny_config());
        const auto dir = scratch_dir("outputs");
        const auto files = emit_outputs(result, dir);
        CHECK(files.size() == 2 + 4 + 2);
        CHECK(std::filesystem::exists(dir / "trials.csv"));
        CHECK(std::filesystem::exists(dir / "cdf_4_perfect.dat"));
        CHECK(std::filesystem::exists(dir / "cdf_8_pc.dat"));
        CHECK(std::filesystem::exists(dir / "cdf_8_analytic.dat"));
        CHECK(slurp(dir / "trials.csv") == trials_csv(result));

        const auto parsed = nlohmann::json::parse(slurp(dir / "summary.json")).get<CampaignSummary>();
        CHECK(parsed == result.summary);
        CHECK(parsed.version.rfind("cellmimo-", 0) == 0);

        // Rows: header plus one per (trial, mode).
        std::istringstream csv(slurp(dir / "trials.csv"));
        std::string line;
        std::size_t rows = 0;
        while (std::getline(csv, line))
            ++rows;
        CHECK(rows == 1 + 24 * 2);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("unwritable output directory reports the path")
    {
        const auto result = run_campaign(tiny_config());
        const auto blocker = scratch_dir("blocker");
        std::ofstream(blocker) << "x";
        try {
            emit_outputs(result, blocker / "sub");
            FAIL("expected an I/O error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
        }
        std::filesystem::remove(blocker);
    }
}
