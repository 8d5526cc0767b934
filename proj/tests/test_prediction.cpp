#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "votedyn/prediction.hpp"
#include "votedyn/rng.hpp"

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

TEST_CASE("four early samples forecast the final count")
{
    const SolveResult truth = solve({0.3, 200}, kParams, 2880.0);
    Trajectory early = sample_every(truth.trajectory, 30.0);
    early.resize(4);

    const Prediction p = predict(early, 200, kParams, 2880.0);
    CHECK_THAT(p.predicted_final_votes, Catch::Matchers::WithinRel(truth.final_votes, 0.05));
    CHECK(p.predicted_promoted);
    REQUIRE(p.predicted_promotion_time.has_value());
    REQUIRE(truth.promoted_at.has_value());
    CHECK_THAT(*p.predicted_promotion_time, Catch::Matchers::WithinAbs(*truth.promoted_at, 30.0));
    CHECK(p.horizon == 2880.0);
}

TEST_CASE("prediction is a fixed point on the model's own full history")
{
    const SolveResult truth = solve({0.12, 80}, kParams, 2880.0);
    const Prediction p = predict(sample_every(truth.trajectory, 30.0), 80, kParams, 2880.0);
    CHECK_THAT(p.predicted_final_votes, Catch::Matchers::WithinRel(truth.final_votes, 0.01));
    CHECK_THAT(p.r_hat, Catch::Matchers::WithinRel(0.12, 0.01));
}

TEST_CASE("a dull story is predicted to stay obscure")
{
    const SolveResult truth = solve({0.04, 0}, kParams, 2880.0);
    const Prediction p = predict(sample_every(truth.trajectory, 120.0), 0, kParams, 2880.0);
    CHECK_FALSE(p.predicted_promoted);
    CHECK_FALSE(p.predicted_promotion_time.has_value());
    CHECK(p.predicted_final_votes < kParams.h);
}

TEST_CASE("prediction from an event stream uses the early prefix")
{
    const VoteEventStream stream = simulate({0.35, 300}, kParams, 2880.0, 31);
    const Prediction p = predict(stream, 20, kParams, 2880.0);
    const double actual = static_cast<double>(stream.events.size());
    CHECK_THAT(p.predicted_final_votes, Catch::Matchers::WithinRel(actual, 0.35));
    CHECK(p.predicted_promoted);
}

TEST_CASE("promotion boundary")
{
    SECTION("is nonincreasing in the submitter's fan count")
    {
        double prev = 2.0;
        for (int fans : {0, 10, 100, 1000}) {
            const auto r_min = promotion_boundary(fans, kParams);
            REQUIRE(r_min.has_value());
            CHECK(*r_min <= prev);
            CHECK(*r_min > 0.0);
            CHECK(*r_min <= 1.0);
            prev = *r_min;
        }
    }

    SECTION("the returned r actually promotes, just below it does not")
    {
        const auto r_min = promotion_boundary(100, kParams);
        REQUIRE(r_min.has_value());
        CHECK(solve({*r_min, 100}, kParams, 1440.0).promoted_at.has_value());
        CHECK_FALSE(
            solve({*r_min * 0.995, 100}, kParams, 1440.0).promoted_at.has_value());
    }

    SECTION("classifies random stories like direct solving")
    {
        Rng rng(404);
        int agree = 0;
        const int trials = 60;
        for (int i = 0; i < trials; ++i) {
            const double r = std::exp(rng.uniform(std::log(0.005), 0.0));
            const int fans = static_cast<int>(rng.uniform_int(0, 2000));
            const auto r_min = promotion_boundary(fans, kParams);
            const bool above = r_min.has_value() && r >= *r_min;
            const bool promoted =
                solve({r, fans}, kParams, 1440.0).promoted_at.has_value();
            agree += (above == promoted) ? 1 : 0;
        }
        CHECK(agree >= trials - 1);  // bisection tolerance may straddle one
    }

    SECTION("an unreachable threshold reports never")
    {
        ModelParams p = kParams;
        p.h = 1000000;
        CHECK_FALSE(promotion_boundary(0, p).has_value());
        CHECK_FALSE(promotion_boundary(10000, p).has_value());
    }

    SECTION("rejects negative fan counts")
    {
        CHECK_THROWS_AS(promotion_boundary(-1, kParams), std::domain_error);
    }
}

TEST_CASE("success classification is a strict threshold")
{
    Prediction p;
    p.predicted_final_votes = 506.0;
    CHECK(classify_success(p));
    p.predicted_final_votes = 505.0;
    CHECK_FALSE(classify_success(p));
    p.predicted_final_votes = 0.0;
    CHECK_FALSE(classify_success(p));
    p.predicted_final_votes = 100.0;
    CHECK(classify_success(p, 99.0));
}

TEST_CASE("predicted finals never decrease with fitted interestingness")
{
    double prev = 0.0;
    for (double r : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        const double final_votes = solve({r, 150}, kParams, 2880.0).final_votes;
        CHECK(final_votes >= prev);
        prev = final_votes;
    }
}
