#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "votedyn/model.hpp"

namespace votedyn {

/// One (time, cumulative votes) sample.
struct TrajectoryPoint {
    double t = 0.0;
    double votes = 1.0;
};

/// Time-ordered cumulative-vote samples; always starts at (0, 1).
using Trajectory = std::vector<TrajectoryPoint>;

inline void validate_trajectory(const Trajectory& traj)
{
    if (traj.empty()) throw std::invalid_argument("trajectory is empty");
    if (traj.front().t != 0.0 || traj.front().votes != 1.0)
        throw std::invalid_argument("trajectory must start at (0, 1)");
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (!(traj[i].t > traj[i - 1].t))
            throw std::invalid_argument("trajectory times must be strictly increasing");
        if (traj[i].votes < traj[i - 1].votes)
            throw std::invalid_argument("trajectory votes must be nondecreasing");
    }
}

/// Linear interpolation of the vote count at time `t`, clamped to the ends.
inline double votes_at(const Trajectory& traj, double t)
{
    if (traj.empty()) throw std::invalid_argument("trajectory is empty");
    if (t <= traj.front().t) return traj.front().votes;
    if (t >= traj.back().t) return traj.back().votes;
    auto hi = std::lower_bound(traj.begin(), traj.end(), t,
                               [](const TrajectoryPoint& p, double v) { return p.t < v; });
    auto lo = hi - 1;
    const double w = (t - lo->t) / (hi->t - lo->t);
    return lo->votes + w * (hi->votes - lo->votes);
}

struct SolveResult {
    Trajectory trajectory;
    std::optional<double> promoted_at;  ///< minutes, if the threshold was crossed in the window
    double final_votes = 1.0;
    double final_fan_pool = 0.0;
};

namespace detail {

struct OdeState {
    double votes;
    double fan_pool;
};

struct OdeDeriv {
    double d_votes;
    double d_fan_pool;
};

inline OdeDeriv vote_ode_rhs(double t, const OdeState& y, const StoryParams& story,
                             const ModelParams& params, std::optional<double> promoted_at)
{
    StoryState state{t, y.votes, y.fan_pool, promoted_at};
    const double dn = vote_rate(state, story, params);
    const double ds = -params.omega * y.fan_pool + fan_increment(std::max(y.votes, 1.0), params) * dn;
    return {dn, ds};
}

inline OdeState rk4_step(double t, const OdeState& y, double dt, const StoryParams& story,
                         const ModelParams& params, std::optional<double> promoted_at)
{
    if (dt <= 0.0) return y;
    const auto k1 = vote_ode_rhs(t, y, story, params, promoted_at);
    const OdeState y2{y.votes + 0.5 * dt * k1.d_votes, y.fan_pool + 0.5 * dt * k1.d_fan_pool};
    const auto k2 = vote_ode_rhs(t + 0.5 * dt, y2, story, params, promoted_at);
    const OdeState y3{y.votes + 0.5 * dt * k2.d_votes, y.fan_pool + 0.5 * dt * k2.d_fan_pool};
    const auto k3 = vote_ode_rhs(t + 0.5 * dt, y3, story, params, promoted_at);
    const OdeState y4{y.votes + dt * k3.d_votes, y.fan_pool + dt * k3.d_fan_pool};
    const auto k4 = vote_ode_rhs(t + dt, y4, story, params, promoted_at);
    OdeState out{
        y.votes + dt / 6.0 * (k1.d_votes + 2.0 * k2.d_votes + 2.0 * k3.d_votes + k4.d_votes),
        y.fan_pool + dt / 6.0 * (k1.d_fan_pool + 2.0 * k2.d_fan_pool + 2.0 * k3.d_fan_pool + k4.d_fan_pool)};
    out.fan_pool = std::max(out.fan_pool, 0.0);
    return out;
}

}  // namespace detail

/// Integrate the coupled vote / fan-pool dynamics from submission to `horizon`.
///
/// Fixed-step RK4 with two regime boundaries handled explicitly: no step
/// straddles the upcoming-window cutoff, and the promotion crossing is
/// located by bisection (to 1e-3 min) within the step where the vote count
/// first reaches the threshold, after which the front-page regime applies.
/// Promotion only happens inside the upcoming window; a story whose count
/// passes the threshold later keeps accumulating friends-channel votes
/// without ever being promoted.
inline SolveResult solve(const StoryParams& story, const ModelParams& params,
                         double horizon, double step = 1.0)
{
    params.validate();
    story.validate();
    if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
    if (!(step > 0.0) || step > 1.0)
        throw std::domain_error("step must lie in (0, 1] minutes");
    step = std::min(step, horizon);

    constexpr double kEventTol = 1e-3;  // minutes

    detail::OdeState y{1.0, static_cast<double>(story.submitter_fans)};
    std::optional<double> promoted_at;
    if (y.votes >= params.h) promoted_at = 0.0;

    SolveResult result;
    result.trajectory.push_back({0.0, y.votes});

    double t = 0.0;
    long grid_index = 0;
    while (t < horizon - 1e-9) {
        ++grid_index;
        double t_next = std::min(static_cast<double>(grid_index) * step, horizon);
        if (!promoted_at && t < params.upcoming_window && t_next > params.upcoming_window) {
            t_next = params.upcoming_window;  // land exactly on the cutoff
            --grid_index;
        }
        const double dt = t_next - t;

        detail::OdeState y_next = detail::rk4_step(t, y, dt, story, params, promoted_at);
        const bool promotable = !promoted_at && t < params.upcoming_window;
        if (promotable && y_next.votes >= params.h) {
            // Locate the crossing; keep the bracket end that has already crossed
            // so the recorded promotion state satisfies votes >= h.
            double lo = 0.0, hi = dt;
            while (hi - lo > kEventTol) {
                const double mid = 0.5 * (lo + hi);
                if (detail::rk4_step(t, y, mid, story, params, promoted_at).votes >= params.h)
                    hi = mid;
                else
                    lo = mid;
            }
            y = detail::rk4_step(t, y, hi, story, params, promoted_at);
            promoted_at = t + hi;
            y = detail::rk4_step(*promoted_at, y, dt - hi, story, params, promoted_at);
        } else {
            y = y_next;
        }

        t = t_next;
        result.trajectory.push_back({t, y.votes});
    }

    result.promoted_at = promoted_at;
    result.final_votes = y.votes;
    result.final_fan_pool = y.fan_pool;
    return result;
}

}  // namespace votedyn
