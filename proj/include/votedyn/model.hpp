#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace votedyn {

/// Site-wide constants of the voting model. Defaults are the calibrated
/// values for the modeled site; only `r` and the submitter fan count vary
/// per story.
struct ModelParams {
    double nu = 10.0;        ///< general users visiting the site, per minute
    double c = 0.3;          ///< fraction of visitors browsing upcoming pages
    double omega = 0.002;    ///< per-minute rate a voter's fans return
    double mu = 0.6;         ///< page-view inverse-Gaussian mean, pages
    double lambda = 0.6;     ///< page-view inverse-Gaussian shape, pages
    double a = 51.0;         ///< fans gained per new vote, prefactor
    double b = 0.62;         ///< fans gained per new vote, exponent
    int h = 40;              ///< promotion threshold, votes
    double v_upcoming = 0.06;   ///< upcoming-list drift, pages per minute
    double v_front = 0.003;     ///< front-page drift, pages per minute
    double upcoming_window = 1440.0;  ///< minutes a story stays in the upcoming list

    void validate() const
    {
        if (!(nu > 0.0)) throw std::domain_error("nu must be positive");
        if (!(c > 0.0 && c < 1.0)) throw std::domain_error("c must lie in (0, 1)");
        if (!(omega > 0.0)) throw std::domain_error("omega must be positive");
        if (!(mu > 0.0)) throw std::domain_error("mu must be positive");
        if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
        if (!(a > 0.0)) throw std::domain_error("a must be positive");
        if (!(b > 0.0)) throw std::domain_error("b must be positive");
        if (h < 1) throw std::domain_error("h must be a positive vote count");
        if (!(v_upcoming > 0.0)) throw std::domain_error("v_upcoming must be positive");
        if (!(v_front > 0.0)) throw std::domain_error("v_front must be positive");
        if (!(upcoming_window > 0.0)) throw std::domain_error("upcoming_window must be positive");
    }
};

/// The two story-specific parameters.
struct StoryParams {
    double r = 0.0;          ///< probability a user who sees the story votes, (0, 1]
    int submitter_fans = 0;  ///< fans of the submitter, the initial fan pool

    /// r = 0 is outside the fit domain but a valid degenerate dynamics input.
    void validate(bool allow_zero_r = true) const
    {
        if (allow_zero_r ? !(r >= 0.0 && r <= 1.0) : !(r > 0.0 && r <= 1.0))
            throw std::domain_error("interestingness r out of range");
        if (submitter_fans < 0) throw std::domain_error("submitter_fans must be nonnegative");
    }
};

/// Instantaneous state of one story.
struct StoryState {
    double t = 0.0;         ///< minutes since submission
    double votes = 1.0;     ///< cumulative votes; the submitter's vote is included
    double fan_pool = 0.0;  ///< fans of prior voters who have not yet seen the story
    std::optional<double> promoted_at;  ///< promotion time; regime flag once set
};

/// Per-channel discovery rates, users per minute.
struct ExposureRates {
    double front = 0.0;     ///< via the front page
    double upcoming = 0.0;  ///< via the upcoming-stories pages
    double friends = 0.0;   ///< via the friends interface

    double total() const { return front + upcoming + friends; }
};

/// Fraction of visitors who browse at least to list depth `page`.
///
/// Survival function of an inverse-Gaussian page-view distribution with
/// mean `mu` and shape `lambda`, evaluated at depth page - 1, written in
/// erfc form. Equals 1 at the top of the list and decays monotonically.
inline double page_visibility(double page, double mu, double lambda)
{
    if (!(page >= 1.0)) throw std::domain_error("page position must be >= 1");
    if (!(mu > 0.0) || !(lambda > 0.0))
        throw std::domain_error("inverse-Gaussian parameters must be positive");

    const double x = page - 1.0;
    if (x <= 0.0) return 1.0;

    const double alpha = std::sqrt(lambda / (2.0 * x));
    const double far = std::erfc(alpha * (x + mu) / mu);
    double f = 0.5 * std::erfc(alpha * (x - mu) / mu);
    if (far > 0.0)  // skip the correction once it underflows; exp() may be huge
        f -= 0.5 * std::exp(2.0 * lambda / mu) * far;
    return std::clamp(f, 0.0, 1.0);
}

/// List coordinates at time `t`: position in the upcoming list and, once
/// promoted, on the front page. Positions are fractional pages; the
/// coordinate for the list the story is not on is reported as 1 and never
/// enters any rate (the exposure gates keep it out).
struct ListPosition {
    double upcoming_page = 1.0;
    double front_page = 1.0;
};

inline ListPosition list_position(double t, std::optional<double> promoted_at,
                                  const ModelParams& params)
{
    if (!(t >= 0.0)) throw std::domain_error("time must be nonnegative");

    ListPosition pos;
    pos.upcoming_page = 1.0 + params.v_upcoming * t;
    if (promoted_at) {
        const double at = *promoted_at;
        if (!(at <= t)) throw std::domain_error("promoted_at must not exceed t");
        pos.front_page = 1.0 + params.v_front * (t - at);
    }
    return pos;
}

/// Discovery rates for the three channels at the given state.
///
/// The promotion gate is the sticky `promoted_at` flag, not a re-comparison
/// of the (real-valued) vote count against the threshold, so the regime
/// cannot chatter. Upcoming exposure ends after `upcoming_window` minutes.
inline ExposureRates exposure_rates(const StoryState& state, const ModelParams& params)
{
    const ListPosition pos = list_position(state.t, state.promoted_at, params);
    ExposureRates k;
    k.friends = params.omega * std::max(state.fan_pool, 0.0);
    if (state.promoted_at) {
        k.front = params.nu * page_visibility(pos.front_page, params.mu, params.lambda);
    } else if (state.t <= params.upcoming_window) {
        k.upcoming = params.c * params.nu * page_visibility(pos.upcoming_page, params.mu, params.lambda);
    }
    return k;
}

/// Right-hand side of the vote rate equation: votes per minute.
inline double vote_rate(const StoryState& state, const StoryParams& story,
                        const ModelParams& params)
{
    return story.r * exposure_rates(state, params).total();
}

/// Expected fans gained by the pool when a story at `votes` votes gains one more.
inline double fan_increment(double votes, const ModelParams& params)
{
    if (!(votes >= 1.0)) throw std::domain_error("vote count must be >= 1");
    return params.a * std::pow(votes, -params.b);
}

}  // namespace votedyn
