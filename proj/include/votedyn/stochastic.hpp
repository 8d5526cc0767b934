#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "votedyn/model.hpp"
#include "votedyn/rng.hpp"
#include "votedyn/solver.hpp"

namespace votedyn {

struct VoteEvent {
    double t = 0.0;
    int index = 1;       ///< vote ordinal; 1 is the submitter's vote at t=0
    bool via_friends = false;
};

struct VoteEventStream {
    StoryParams story;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    std::optional<double> promoted_at;
    std::vector<VoteEvent> events;  ///< time-ordered, contiguous indices from 1
    double final_fan_pool = 0.0;
};

inline void validate_stream(const VoteEventStream& stream)
{
    if (stream.events.empty()) throw std::invalid_argument("event stream is empty");
    const auto& first = stream.events.front();
    if (first.t != 0.0 || first.index != 1 || first.via_friends)
        throw std::invalid_argument("first event must be the submitter's vote at t=0");
    for (std::size_t i = 1; i < stream.events.size(); ++i) {
        if (stream.events[i].index != static_cast<int>(i) + 1)
            throw std::invalid_argument("event indices must be contiguous from 1");
        if (stream.events[i].t < stream.events[i - 1].t)
            throw std::invalid_argument("event times must be nondecreasing");
    }
}

/// Draw one realization of the voting process by thinning.
///
/// Between votes every intensity component is nonincreasing (list positions
/// drift down, the fan pool decays, the upcoming window can only close), and
/// regime switches happen only at accepted votes, so the rate evaluated at
/// the current time is a valid bound until the next vote. Rejected proposals
/// advance the clock. Each accepted vote bumps the fan pool by the expected
/// per-vote increment evaluated at the pre-vote count, mirroring the
/// deterministic dynamics; the attribution flag is drawn from the friends
/// channel's share of the total rate at the event time.
inline VoteEventStream simulate(const StoryParams& story, const ModelParams& params,
                                double horizon, std::uint64_t seed)
{
    params.validate();
    story.validate();
    if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");

    Rng rng(seed);
    VoteEventStream stream;
    stream.story = story;
    stream.seed = seed;
    stream.horizon = horizon;
    stream.events.push_back({0.0, 1, false});

    double t = 0.0;
    double fan_pool = static_cast<double>(story.submitter_fans);
    long votes = 1;
    std::optional<double> promoted_at;
    if (votes >= params.h) promoted_at = 0.0;

    while (true) {
        const StoryState here{t, static_cast<double>(votes), fan_pool, promoted_at};
        const double bound = story.r * exposure_rates(here, params).total();
        if (!(bound > 0.0)) break;

        const double wait = rng.exponential(bound);
        if (t + wait > horizon) break;
        const double t_next = t + wait;
        fan_pool *= std::exp(-params.omega * wait);
        t = t_next;

        const StoryState at{t, static_cast<double>(votes), fan_pool, promoted_at};
        const ExposureRates k = exposure_rates(at, params);
        const double rate = story.r * k.total();
        if (rng.uniform() * bound >= rate) continue;  // thinned out

        const bool via_friends = rng.uniform() * k.total() < k.friends;
        fan_pool += fan_increment(static_cast<double>(votes), params);
        ++votes;
        if (!promoted_at && votes >= params.h && t <= params.upcoming_window)
            promoted_at = t;
        stream.events.push_back({t, static_cast<int>(votes), via_friends});
    }

    stream.promoted_at = promoted_at;
    stream.final_fan_pool = fan_pool * std::exp(-params.omega * (horizon - t));
    return stream;
}

/// Cumulative vote count of a single stream at time `t` (step function).
inline double stream_votes_at(const VoteEventStream& stream, double t)
{
    long n = 0;
    for (const auto& ev : stream.events) {
        if (ev.t > t) break;
        ++n;
    }
    return static_cast<double>(n);
}

/// Pointwise mean of `n_runs` simulated paths on a 10-minute grid.
/// Run i uses the seed derived from (seed, i), so the result is independent
/// of evaluation order.
inline Trajectory ensemble_mean(const StoryParams& story, const ModelParams& params,
                                double horizon, int n_runs, std::uint64_t seed)
{
    if (n_runs < 1) throw std::domain_error("n_runs must be at least 1");
    if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");

    std::vector<double> grid;
    for (double t = 0.0; t < horizon; t += 10.0) grid.push_back(t);
    grid.push_back(horizon);

    std::vector<double> sums(grid.size(), 0.0);
    for (int run = 0; run < n_runs; ++run) {
        const VoteEventStream stream = simulate(story, params, horizon, derive_seed(seed, run));
        std::size_t gi = 0;
        long count = 0;
        for (const auto& ev : stream.events) {
            while (gi < grid.size() && grid[gi] < ev.t) sums[gi++] += static_cast<double>(count);
            ++count;
        }
        while (gi < grid.size()) sums[gi++] += static_cast<double>(count);
    }

    Trajectory mean;
    mean.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        mean.push_back({grid[i], sums[i] / n_runs});
    return mean;
}

}  // namespace votedyn
