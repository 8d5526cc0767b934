#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "votedyn/estimation.hpp"

using namespace votedyn;

namespace {

const ModelParams kParams;

Trajectory sample_every(const Trajectory& traj, double spacing)
{
    Trajectory out;
    for (const auto& p : traj)
        if (std::fmod(p.t, spacing) == 0.0) out.push_back(p);
    return out;
}

}  // namespace

TEST_CASE("fit recovers the generating interestingness from clean data")
{
    const double r_true = 0.2;
    const SolveResult sol = solve({r_true, 100}, kParams, 2880.0);
    const Trajectory obs = sample_every(sol.trajectory, 30.0);
    REQUIRE(obs.size() == 97);

    const FitResult fit = fit_r(obs, 100, kParams, 2880.0);
    CHECK_THAT(fit.r_hat, Catch::Matchers::WithinRel(r_true, 0.01));
    CHECK(fit.n_obs == 97);
    CHECK(fit.rms_error >= 0.0);
    CHECK(fit.rms_error < 1.0);  // noiseless round trip: near-exact

    SECTION("recovery holds across the observed r range and fan counts")
    {
        const double rs[] = {0.02, 0.1, 0.3, 0.71};
        const int fans[] = {1000, 100, 10, 0};
        for (int i = 0; i < 4; ++i) {
            const SolveResult gen = solve({rs[i], fans[i]}, kParams, 2880.0);
            const FitResult f =
                fit_r(sample_every(gen.trajectory, 30.0), fans[i], kParams, 2880.0);
            CHECK_THAT(f.r_hat, Catch::Matchers::WithinRel(rs[i], 0.01));
        }
    }
}

TEST_CASE("truncated early histories still identify the story")
{
    const double r_true = 0.3;
    const SolveResult sol = solve({r_true, 200}, kParams, 2880.0);
    Trajectory early = sample_every(sol.trajectory, 30.0);
    early.resize(4);  // 0, 30, 60, 90 minutes
    const FitResult fit = fit_r(early, 200, kParams, 2880.0);
    CHECK_THAT(fit.r_hat, Catch::Matchers::WithinRel(r_true, 0.05));
}

TEST_CASE("fit is invariant to observation order")
{
    const SolveResult sol = solve({0.15, 50}, kParams, 2880.0);
    Trajectory obs = sample_every(sol.trajectory, 60.0);
    const FitResult sorted_fit = fit_r(obs, 50, kParams, 2880.0);
    std::shuffle(obs.begin(), obs.end(), std::mt19937(99));
    const FitResult shuffled_fit = fit_r(obs, 50, kParams, 2880.0);
    CHECK(sorted_fit.r_hat == shuffled_fit.r_hat);
    CHECK(sorted_fit.rms_error == shuffled_fit.rms_error);
}

TEST_CASE("degenerate and invalid observations are rejected")
{
    CHECK_THROWS_AS(fit_r({{0.0, 1.0}}, 0, kParams), std::invalid_argument);
    CHECK_THROWS_AS(fit_r({{0.0, 1.0}, {60.0, 1.0}, {120.0, 1.0}}, 0, kParams),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_r({{0.0, 1.0}, {3000.0, 50.0}}, 0, kParams, 2880.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_r({{5.0, 2.0}, {60.0, 9.0}}, 0, kParams), std::invalid_argument);
    CHECK_THROWS_AS(fit_r({{0.0, 1.0}, {60.0, 9.0}}, -1, kParams), std::domain_error);
    CHECK_THROWS_AS(fit_r({{0.0, 1.0}, {60.0, 9.0}}, 0, kParams, 0.0), std::domain_error);
}

TEST_CASE("the RMS objective bottoms out at the generating r on the scan grid")
{
    const double r_true = 0.32;
    const SolveResult sol = solve({r_true, 100}, kParams, 2880.0);
    const Trajectory obs = sample_every(sol.trajectory, 30.0);
    const double t_last = obs.back().t;

    const auto rms_at = [&](double r) {
        const SolveResult s = solve({r, 100}, kParams, t_last);
        double sq = 0.0;
        for (const auto& o : obs) {
            const double d = votes_at(s.trajectory, o.t) - o.votes;
            sq += d * d;
        }
        return std::sqrt(sq / obs.size());
    };

    double best_r = 0.0, best = 1e300;
    for (int i = 0; i < 50; ++i) {
        const double r = std::exp(std::log(1e-4) + i * (-std::log(1e-4)) / 49.0);
        const double v = rms_at(std::min(r, 1.0));
        if (v < best) {
            best = v;
            best_r = r;
        }
    }
    // nearest grid point to r_true wins the scan
    CHECK_THAT(std::log(best_r), Catch::Matchers::WithinAbs(std::log(r_true), 0.1));
}

TEST_CASE("fitting from event streams truncates to the first k votes")
{
    const VoteEventStream stream = simulate({0.25, 150}, kParams, 2880.0, 21);
    REQUIRE(stream.events.size() > 30);

    const FitResult full = fit_r_from_events(stream, static_cast<int>(stream.events.size()),
                                             kParams, 2880.0);
    Trajectory as_traj;
    for (const auto& ev : stream.events)
        as_traj.push_back({ev.t, static_cast<double>(ev.index)});
    const FitResult direct = fit_r(as_traj, 150, kParams, 2880.0);
    CHECK(full.r_hat == direct.r_hat);

    const FitResult first20 = fit_r_from_events(stream, 20, kParams, 2880.0);
    CHECK(first20.n_obs == 20);
    CHECK_THAT(first20.r_hat, Catch::Matchers::WithinRel(0.25, 0.5));  // coarse: 20 noisy votes

    SECTION("k beyond the stream length falls back to the whole stream")
    {
        const FitResult beyond =
            fit_r_from_events(stream, static_cast<int>(stream.events.size()) + 500, kParams,
                              2880.0);
        CHECK(beyond.r_hat == full.r_hat);
        CHECK(beyond.n_obs == full.n_obs);
    }

    SECTION("a submitter-only stream cannot be fitted")
    {
        const VoteEventStream quiet = simulate({0.0, 10}, kParams, 2880.0, 3);
        CHECK_THROWS_AS(fit_r_from_events(quiet, 10, kParams, 2880.0), std::invalid_argument);
        CHECK_THROWS_AS(fit_r_from_events(stream, 1, kParams, 2880.0), std::invalid_argument);
    }
}

TEST_CASE("lognormal fitting")
{
    SECTION("degenerate sample")
    {
        const std::vector<double> same(5, std::exp(-1.67));
        const LognormalFit fit = fit_lognormal(same);
        CHECK_THAT(fit.mean_log, Catch::Matchers::WithinAbs(-1.67, 1e-12));
        CHECK_THAT(fit.sd_log, Catch::Matchers::WithinAbs(0.0, 1e-12));
    }

    SECTION("two-point sample")
    {
        const LognormalFit fit = fit_lognormal({std::exp(-2.0), std::exp(-1.0)});
        CHECK_THAT(fit.mean_log, Catch::Matchers::WithinAbs(-1.5, 1e-12));
        CHECK_THAT(fit.sd_log, Catch::Matchers::WithinAbs(0.5, 1e-12));
    }

    SECTION("sampling recovery within three standard errors")
    {
        Rng rng(606);
        std::vector<double> values;
        values.reserve(10000);
        for (int i = 0; i < 10000; ++i) values.push_back(std::exp(rng.normal(-1.67, 0.47)));
        const LognormalFit fit = fit_lognormal(values);
        CHECK_THAT(fit.mean_log, Catch::Matchers::WithinAbs(-1.67, 3.0 * 0.47 / 100.0));
        CHECK_THAT(fit.sd_log,
                   Catch::Matchers::WithinAbs(0.47, 3.0 * 0.47 / std::sqrt(2.0 * 10000.0)));
    }

    SECTION("rejects invalid input")
    {
        CHECK_THROWS_AS(fit_lognormal({1.0}), std::invalid_argument);
        CHECK_THROWS_AS(fit_lognormal({0.5, 0.0}), std::domain_error);
        CHECK_THROWS_AS(fit_lognormal({0.5, -2.0}), std::domain_error);
    }
}
