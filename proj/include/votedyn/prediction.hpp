#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "votedyn/estimation.hpp"
#include "votedyn/model.hpp"
#include "votedyn/solver.hpp"
#include "votedyn/stochastic.hpp"

namespace votedyn {

struct Prediction {
    double r_hat = 0.0;
    double predicted_final_votes = 1.0;
    bool predicted_promoted = false;
    std::optional<double> predicted_promotion_time;  ///< present iff predicted_promoted
    double horizon = 0.0;
};

namespace detail {

inline Prediction predict_from_fit(const FitResult& fit, int submitter_fans,
                                   const ModelParams& params, double horizon)
{
    const SolveResult sol = solve(StoryParams{fit.r_hat, submitter_fans}, params, horizon);
    Prediction p;
    p.r_hat = fit.r_hat;
    p.predicted_final_votes = sol.final_votes;
    p.predicted_promoted = sol.promoted_at.has_value();
    p.predicted_promotion_time = sol.promoted_at;
    p.horizon = horizon;
    return p;
}

}  // namespace detail

/// Fit r on the early history, then run the fitted story out to `horizon`.
/// Early histories whose fit lands below the promotion boundary still get
/// the solver's small final count (predicted_promoted=false marks them).
inline Prediction predict(const Trajectory& early, int submitter_fans,
                          const ModelParams& params, double horizon = 2880.0)
{
    const FitResult fit = fit_r(early, submitter_fans, params, horizon);
    return detail::predict_from_fit(fit, submitter_fans, params, horizon);
}

/// Same, fitting on the first min(first_k, total) events of a stream.
inline Prediction predict(const VoteEventStream& early, int first_k,
                          const ModelParams& params, double horizon = 2880.0)
{
    const FitResult fit = fit_r_from_events(early, first_k, params, horizon);
    return detail::predict_from_fit(fit, early.story.submitter_fans, params, horizon);
}

/// Smallest r in (0, 1] whose story gets promoted, by bisection on log r to
/// 1e-4 relative; nullopt means not even r=1 promotes ("never"). `horizon`
/// should cover the upcoming window (promotion cannot happen later anyway).
inline std::optional<double> promotion_boundary(int submitter_fans, const ModelParams& params,
                                                double horizon = 1440.0)
{
    if (submitter_fans < 0) throw std::domain_error("submitter_fans must be nonnegative");
    const auto promotes = [&](double r) {
        return solve(StoryParams{r, submitter_fans}, params, horizon).promoted_at.has_value();
    };
    if (!promotes(1.0)) return std::nullopt;
    double lo = 1e-4, hi = 1.0;
    if (promotes(lo)) return lo;
    while (hi - lo > 1e-4 * lo) {
        const double mid = std::sqrt(lo * hi);
        if (promotes(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;  // the promoting end of the bracket
}

/// Strict "more than `threshold_votes` votes" success call.
inline bool classify_success(const Prediction& prediction, double threshold_votes = 505.0)
{
    return prediction.predicted_final_votes > threshold_votes;
}

}  // namespace votedyn
