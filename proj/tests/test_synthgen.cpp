#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "votedyn/io.hpp"
#include "votedyn/synthgen.hpp"

using namespace votedyn;

namespace {
const ModelParams kParams;
}

TEST_CASE("population sampling")
{
    SECTION("zero spread pins every story to exp(mean_log)")
    {
        PopulationSpec spec;
        spec.n_stories = 50;
        spec.mean_log = -1.0;
        spec.sd_log = 0.0;
        spec.fans.kind = FanDistKind::Constant;
        spec.fans.constant_value = 25;
        const auto stories = sample_population(spec);
        REQUIRE(stories.size() == 50);
        for (const auto& s : stories) {
            CHECK(s.r == std::exp(-1.0));
            CHECK(s.submitter_fans == 25);
        }
    }

    SECTION("rejection keeps r within (0,1] even for mass near 1")
    {
        PopulationSpec spec;
        spec.n_stories = 500;
        spec.mean_log = -0.1;
        spec.sd_log = 0.5;
        spec.seed = 3;
        int close_to_one = 0;
        for (const auto& s : sample_population(spec)) {
            CHECK(s.r > 0.0);
            CHECK(s.r <= 1.0);
            close_to_one += s.r > 0.8 ? 1 : 0;
        }
        CHECK(close_to_one > 0);  // the truncation boundary is actually exercised
    }

    SECTION("an impossible truncation is reported, not spun on")
    {
        PopulationSpec spec;
        spec.n_stories = 1;
        spec.mean_log = 10.0;  // exp(10) >> 1
        spec.sd_log = 0.0;
        CHECK_THROWS_AS(sample_population(spec), std::runtime_error);
    }

    SECTION("identical specs give identical populations")
    {
        PopulationSpec spec;
        spec.n_stories = 40;
        spec.seed = 77;
        const auto a = sample_population(spec);
        const auto b = sample_population(spec);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].r == b[i].r);
            CHECK(a[i].submitter_fans == b[i].submitter_fans);
        }
        PopulationSpec other = spec;
        other.seed = 78;
        const auto c = sample_population(other);
        bool identical = true;
        for (std::size_t i = 0; i < a.size(); ++i) identical = identical && a[i].r == c[i].r;
        CHECK_FALSE(identical);
    }

    SECTION("spec validation")
    {
        PopulationSpec spec;
        spec.n_stories = 0;
        CHECK_THROWS_AS(spec.validate(), std::domain_error);
        spec.n_stories = 1;
        spec.sd_log = -0.1;
        CHECK_THROWS_AS(spec.validate(), std::domain_error);
        spec.sd_log = 0.4;
        spec.horizon = 0.0;
        CHECK_THROWS_AS(spec.validate(), std::domain_error);
    }
}

TEST_CASE("fan distributions")
{
    Rng rng(10);

    SECTION("constant")
    {
        FanDistribution d;
        d.kind = FanDistKind::Constant;
        d.constant_value = 321;
        const FanSampler sample(d);
        for (int i = 0; i < 10; ++i) CHECK(sample(rng) == 321);
    }

    SECTION("uniform stays in range and hits both ends")
    {
        FanDistribution d;
        d.kind = FanDistKind::Uniform;
        d.uniform_min = 5;
        d.uniform_max = 8;
        const FanSampler sample(d);
        bool lo = false, hi = false;
        for (int i = 0; i < 500; ++i) {
            const long v = sample(rng);
            REQUIRE(v >= 5);
            REQUIRE(v <= 8);
            lo = lo || v == 5;
            hi = hi || v == 8;
        }
        CHECK(lo);
        CHECK(hi);
    }

    SECTION("power law matches its own mass function")
    {
        FanDistribution d;  // default: power law, exponent 2, cap 10000
        const FanSampler sample(d);
        int ones = 0, twos = 0;
        long max_seen = 0;
        constexpr int n = 20000;
        for (int i = 0; i < n; ++i) {
            const long v = sample(rng);
            REQUIRE(v >= 1);
            REQUIRE(v <= 10000);
            ones += v == 1 ? 1 : 0;
            twos += v == 2 ? 1 : 0;
            max_seen = std::max(max_seen, v);
        }
        // P(1) = 1/zeta-ish = 0.6079.., P(2) = P(1)/4
        CHECK_THAT(static_cast<double>(ones) / n, Catch::Matchers::WithinAbs(0.608, 0.015));
        CHECK_THAT(static_cast<double>(twos) / n, Catch::Matchers::WithinAbs(0.152, 0.012));
        CHECK(max_seen > 100);  // the tail is actually heavy
    }

    SECTION("validation")
    {
        FanDistribution d;
        d.kind = FanDistKind::Constant;
        d.constant_value = -1;
        CHECK_THROWS_AS(d.validate(), std::domain_error);
        d.kind = FanDistKind::Uniform;
        d.uniform_min = 10;
        d.uniform_max = 5;
        CHECK_THROWS_AS(d.validate(), std::domain_error);
        d.kind = FanDistKind::PowerLaw;
        d.power_cap = 0;
        CHECK_THROWS_AS(d.validate(), std::domain_error);
        d.power_cap = 100;
        d.power_exponent = 0.0;
        CHECK_THROWS_AS(d.validate(), std::domain_error);
    }
}

TEST_CASE("dataset generation")
{
    SECTION("vanishing interestingness leaves only submitter events")
    {
        PopulationSpec spec;
        spec.n_stories = 10;
        spec.mean_log = -50.0;  // r ~ 2e-22: no vote fires within any horizon
        spec.sd_log = 0.0;
        spec.horizon = 2880.0;
        for (const auto& stream : generate_dataset(spec, kParams))
            CHECK(stream.events.size() == 1);
    }

    SECTION("same spec regenerates the identical dataset")
    {
        PopulationSpec spec;
        spec.n_stories = 15;
        spec.horizon = 720.0;
        spec.seed = 99;
        const auto a = generate_dataset(spec, kParams);
        const auto b = generate_dataset(spec, kParams);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(stream_to_jsonl(a[i]) == stream_to_jsonl(b[i]));
    }

    SECTION("streams carry their story's parameters and pass validation")
    {
        PopulationSpec spec;
        spec.n_stories = 8;
        spec.horizon = 600.0;
        spec.seed = 123;
        const auto stories = sample_population(spec);
        const auto streams = generate_dataset(spec, kParams);
        REQUIRE(streams.size() == stories.size());
        for (std::size_t i = 0; i < streams.size(); ++i) {
            CHECK(streams[i].story.r == stories[i].r);
            CHECK(streams[i].story.submitter_fans == stories[i].submitter_fans);
            CHECK(streams[i].horizon == 600.0);
            CHECK_NOTHROW(validate_stream(streams[i]));
        }
    }

    SECTION("promoted fraction rises with the interestingness scale")
    {
        double prev = -1.0;
        for (double mean_log : {-2.2, -1.67, -1.1}) {
            PopulationSpec spec;
            spec.n_stories = 100;
            spec.mean_log = mean_log;
            spec.horizon = 1440.0;
            spec.seed = 31;
            int promoted = 0;
            for (const auto& s : generate_dataset(spec, kParams))
                promoted += s.promoted_at.has_value() ? 1 : 0;
            const double fraction = promoted / 100.0;
            CHECK(fraction > prev);
            prev = fraction;
        }
    }

    SECTION("promoted finals are right-skewed")
    {
        PopulationSpec spec;
        spec.n_stories = 120;
        spec.seed = 8;
        std::vector<double> finals;
        for (const auto& s : generate_dataset(spec, kParams))
            if (s.promoted_at) finals.push_back(static_cast<double>(s.events.size()));
        REQUIRE(finals.size() >= 10);
        double mean = 0.0;
        for (double f : finals) mean += f;
        mean /= static_cast<double>(finals.size());
        std::sort(finals.begin(), finals.end());
        const double median = finals[finals.size() / 2];
        CHECK(mean > median);
    }
}
