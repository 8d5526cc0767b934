#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "votedyn/model.hpp"
#include "votedyn/solver.hpp"
#include "votedyn/stochastic.hpp"

namespace votedyn {

struct FitResult {
    double r_hat = 0.0;
    double rms_error = 0.0;           ///< votes, at r_hat
    double rms_relative_error = 0.0;  ///< dimensionless, at r_hat
    int n_obs = 0;
};

namespace detail {

/// Golden-section minimization of a unimodal-ish objective on [lo, hi].
inline double golden_section_min(const std::function<double(double)>& f,
                                 double lo, double hi, double tol)
{
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Least-squares recovery of interestingness from observed cumulative votes.
///
/// Minimizes the RMS difference between the observed counts and the solved
/// model counts at the observation times, over r in [1e-4, 1]: a 50-point
/// scan over log r picks the best cell, then golden-section refines in log
/// space to 1e-4 relative. The model is solved only out to the last
/// observation; `horizon` is the data-admission cap (observations past it
/// are rejected, enforcing the two-day rule upstream).
inline FitResult fit_r(const Trajectory& observations, int submitter_fans,
                       const ModelParams& params, double horizon = 2880.0)
{
    params.validate();
    if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
    if (submitter_fans < 0) throw std::domain_error("submitter_fans must be nonnegative");
    if (observations.size() < 2)
        throw std::invalid_argument("need at least 2 observations");

    Trajectory obs = observations;
    std::sort(obs.begin(), obs.end(),
              [](const TrajectoryPoint& x, const TrajectoryPoint& y) { return x.t < y.t; });
    validate_trajectory(obs);
    if (obs.back().t > horizon)
        throw std::invalid_argument("observation beyond fit horizon");
    if (obs.back().votes <= 1.0)
        throw std::invalid_argument("degenerate observations: no votes beyond the submitter's");

    const double t_last = obs.back().t;
    const auto rms_at = [&](double r) {
        const StoryParams story{std::clamp(r, 1e-4, 1.0), submitter_fans};
        const SolveResult sol = solve(story, params, t_last);
        double sq = 0.0;
        for (const auto& o : obs) {
            const double d = votes_at(sol.trajectory, o.t) - o.votes;
            sq += d * d;
        }
        return std::sqrt(sq / static_cast<double>(obs.size()));
    };

    constexpr double lo_log = -4.0 * 2.302585092994046;  // ln(1e-4)
    constexpr int n_grid = 50;
    const double dx = -lo_log / (n_grid - 1);
    int best = 0;
    double best_val = rms_at(std::exp(lo_log));
    for (int i = 1; i < n_grid; ++i) {
        const double val = rms_at(std::exp(lo_log + i * dx));
        if (val < best_val) {
            best_val = val;
            best = i;
        }
    }
    const double bracket_lo = lo_log + std::max(best - 1, 0) * dx;
    const double bracket_hi = lo_log + std::min(best + 1, n_grid - 1) * dx;
    const double x_hat = detail::golden_section_min(
        [&](double x) { return rms_at(std::exp(x)); }, bracket_lo, bracket_hi, 1e-4);

    FitResult fit;
    fit.r_hat = std::clamp(std::exp(x_hat), 1e-4, 1.0);
    fit.n_obs = static_cast<int>(obs.size());
    const SolveResult sol = solve(StoryParams{fit.r_hat, submitter_fans}, params, t_last);
    double sq = 0.0, sq_rel = 0.0;
    for (const auto& o : obs) {
        const double d = votes_at(sol.trajectory, o.t) - o.votes;
        sq += d * d;
        sq_rel += (d / o.votes) * (d / o.votes);
    }
    fit.rms_error = std::sqrt(sq / fit.n_obs);
    fit.rms_relative_error = std::sqrt(sq_rel / fit.n_obs);
    return fit;
}

/// Fit on the first min(k, total) events of a stream, as the step
/// trajectory (t_i, i). Streams shorter than k are used in full rather
/// than rejected, so population pipelines keep their low-activity stories.
inline FitResult fit_r_from_events(const VoteEventStream& events, int k,
                                   const ModelParams& params, double horizon = 2880.0)
{
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    validate_stream(events);
    const int m = std::min<int>(k, static_cast<int>(events.events.size()));
    if (m < 2)
        throw std::invalid_argument("degenerate observations: no votes beyond the submitter's");
    Trajectory obs;
    obs.reserve(m);
    for (int i = 0; i < m; ++i)
        obs.push_back({events.events[i].t, static_cast<double>(events.events[i].index)});
    return fit_r(obs, events.story.submitter_fans, params, horizon);
}

struct LognormalFit {
    double mean_log = 0.0;
    double sd_log = 0.0;  ///< maximum-likelihood (uncorrected) standard deviation
};

inline LognormalFit fit_lognormal(const std::vector<double>& values)
{
    if (values.size() < 2) throw std::invalid_argument("need at least 2 values");
    double sum = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) throw std::domain_error("values must be positive");
        sum += std::log(v);
    }
    const double n = static_cast<double>(values.size());
    LognormalFit fit;
    fit.mean_log = sum / n;
    double sq = 0.0;
    for (double v : values) {
        const double d = std::log(v) - fit.mean_log;
        sq += d * d;
    }
    fit.sd_log = std::sqrt(sq / n);
    return fit;
}

}  // namespace votedyn
