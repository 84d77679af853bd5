#include "cellmimo/channel.hpp"
#include "cellmimo/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace cellmimo;

namespace {

struct Scenario
{
    NetworkRealization real;
    ActivationState act;
};

Scenario small_network(std::uint64_t seed, double R = 1200.0)
{
    SystemParams p;
    p.R = R;
    Rng rng = make_rng(seed);
    Scenario s;
    s.real = build_realization(p, UniformInOriginCell{}, rng);
    s.act = activate(s.real, p.K, rng);
    return s;
}

} // namespace

TEST_SUITE("channel")
{
    TEST_CASE("fading entries are CN(0,1)")
    {
        Rng rng = make_rng(4);
        const int n = 200000;
        const auto g = sample_fading(n, rng);
        double re = 0, im = 0, re2 = 0, im2 = 0, cross = 0;
        for (int i = 0; i < n; ++i) {
            re += g(i).real();
            im += g(i).imag();
            re2 += g(i).real() * g(i).real();
            im2 += g(i).imag() * g(i).imag();
            cross += g(i).real() * g(i).imag();
        }
        CHECK(std::abs(re / n) < 0.01);
        CHECK(std::abs(im / n) < 0.01);
        CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
        CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
        CHECK(std::abs(cross / n) < 0.01);
        CHECK((re2 + im2) / n == doctest::Approx(1.0).epsilon(0.02));
    }

    TEST_CASE("channels exist exactly for active mobiles")
    {
        auto s = small_network(5);
        Rng rng = make_rng(6);
        const auto ch = sample_channels(s.act, 8, rng);
        CHECK(ch.gains.rows() == 8);
        CHECK(static_cast<std::size_t>(ch.gains.cols()) == s.act.total_active());
        for (std::size_t i = 0; i < s.real.mobiles.size(); ++i)
            CHECK(ch.has(i) == s.act.is_active(i));
    }

    TEST_CASE("pilots are an injection per cell and the representative holds pilot 1")
    {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto s = small_network(seed);
            Rng rng = make_rng(seed + 100);
            const int K = s.real.params.K;
            const auto pa = assign_pilots(s.act, s.real, K, rng);
            CHECK(pa.pilot_of[0] == 1);
            REQUIRE(!pa.contamination_set.empty());
            CHECK(pa.contamination_set[0] == 0);

            std::vector<std::set<int>> used(s.real.cell_count());
            std::size_t on_pilot_one = 0;
            for (std::size_t i = 0; i < s.real.mobiles.size(); ++i) {
                const int pilot = pa.pilot_of[i];
                if (!s.act.is_active(i)) {
                    CHECK(pilot == 0);
                    continue;
                }
                CHECK(pilot >= 1);
                CHECK(pilot <= K);
                CHECK(used[s.real.cell_of[i]].insert(pilot).second);
                on_pilot_one += pilot == 1;
            }
            CHECK(on_pilot_one == pa.contamination_set.size());
            std::set<std::size_t> cells;
            for (auto m : pa.contamination_set) {
                CHECK(pa.pilot_of[m] == 1);
                CHECK(cells.insert(s.real.cell_of[m]).second);
            }
        }
    }

    TEST_CASE("pilot 1 frequency in a full cell is 1/K")
    {
        // Every non-representative cell with K active members uses pilot 1 exactly once;
        // a cell with k < K members uses it with probability k/K.
        auto s = small_network(7);
        const int K = s.real.params.K;
        Rng rng = make_rng(8);
        std::vector<double> hits(s.real.cell_count(), 0.0);
        const int reps = 4000;
        for (int r = 0; r < reps; ++r) {
            const auto pa = assign_pilots(s.act, s.real, K, rng);
            for (std::size_t k = 1; k < pa.contamination_set.size(); ++k)
                hits[s.real.cell_of[pa.contamination_set[k]]] += 1.0;
        }
        for (std::size_t c = 1; c < s.real.cell_count(); ++c) {
            const double expected = static_cast<double>(s.act.active_count[c]) / K;
            CHECK(std::abs(hits[c] / reps - expected) < 5.0 * std::sqrt(0.25 / reps) + 1e-12);
        }
    }

    TEST_CASE("too many active mobiles in a cell is rejected")
    {
        auto s = small_network(9);
        CHECK_THROWS_AS(
            {
                Rng rng = make_rng(1);
                assign_pilots(s.act, s.real, 1, rng);
            },
            ParameterError);
    }

    TEST_CASE("estimates: perfect returns g0, contaminated sums path-loss weighted fades")
    {
        auto s = small_network(10);
        Rng rng = make_rng(11);
        const int K = s.real.params.K;
        const double alpha = s.real.params.alpha;
        const auto ch = sample_channels(s.act, 4, rng);
        const auto pa = assign_pilots(s.act, s.real, K, rng);

        const auto perfect = estimate_channel(CsiMode::perfect, pa.contamination_set, s.real, ch, alpha);
        CHECK((perfect.hhat - ch.column(0)).norm() == 0.0);

        const auto pc =
            estimate_channel(CsiMode::pilot_contaminated, pa.contamination_set, s.real, ch, alpha);
        ComplexVector expected = ComplexVector::Zero(4);
        for (auto m : pa.contamination_set)
            expected += std::pow(norm(s.real.mobiles[m]), -alpha / 2.0) * ch.column(m);
        CHECK((pc.hhat - expected).norm() <= 1e-14 * expected.norm());

        const std::vector<std::size_t> wrong{1};
        CHECK_THROWS_AS(
            estimate_channel(CsiMode::pilot_contaminated, wrong, s.real, ch, alpha), std::logic_error);
    }

    TEST_CASE("mode names round trip")
    {
        CHECK(csi_mode_from_string(to_string(CsiMode::perfect)) == CsiMode::perfect);
        CHECK(csi_mode_from_string(to_string(CsiMode::pilot_contaminated)) == CsiMode::pilot_contaminated);
        CHECK_THROWS_AS(csi_mode_from_string("mmse"), ParameterError);
    }
}
