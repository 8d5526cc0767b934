#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace votedyn {

struct ConfusionMatrix {
    long true_positive = 0;
    long false_positive = 0;
    long true_negative = 0;
    long false_negative = 0;

    long total() const
    {
        return true_positive + false_positive + true_negative + false_negative;
    }
    double accuracy() const
    {
        const long n = total();
        return n == 0 ? 0.0 : static_cast<double>(true_positive + true_negative) / n;
    }
};

/// Scorecard for predicted-vs-actual final votes. Correlation, slope, and R²
/// are absent when the predictions have zero variance (they are undefined
/// there; the error metrics still stand).
struct EvalReport {
    std::optional<double> pearson_correlation;
    double rms_error = 0.0;
    double rms_relative_error = 0.0;  ///< over pairs with actual > 0
    std::optional<double> linear_fit_slope;  ///< OLS actual = slope·predicted + intercept
    std::optional<double> linear_fit_r2;
    ConfusionMatrix confusion;
    double success_threshold = 505.0;
    long n_stories = 0;
};

/// Pairs are (predicted, actual).
inline EvalReport evaluate(const std::vector<std::pair<double, double>>& pairs,
                           double success_threshold = 505.0)
{
    if (pairs.size() < 2) throw std::invalid_argument("need at least 2 prediction pairs");
    const double n = static_cast<double>(pairs.size());

    double mean_p = 0.0, mean_a = 0.0;
    for (const auto& [p, a] : pairs) {
        mean_p += p;
        mean_a += a;
    }
    mean_p /= n;
    mean_a /= n;

    double var_p = 0.0, var_a = 0.0, cov = 0.0, sq = 0.0, sq_rel = 0.0;
    long n_rel = 0;
    EvalReport report;
    report.success_threshold = success_threshold;
    report.n_stories = static_cast<long>(pairs.size());
    for (const auto& [p, a] : pairs) {
        var_p += (p - mean_p) * (p - mean_p);
        var_a += (a - mean_a) * (a - mean_a);
        cov += (p - mean_p) * (a - mean_a);
        sq += (p - a) * (p - a);
        if (a > 0.0) {
            sq_rel += ((p - a) / a) * ((p - a) / a);
            ++n_rel;
        }
        const bool pred_success = p > success_threshold;
        const bool act_success = a > success_threshold;
        if (pred_success && act_success) ++report.confusion.true_positive;
        if (pred_success && !act_success) ++report.confusion.false_positive;
        if (!pred_success && act_success) ++report.confusion.false_negative;
        if (!pred_success && !act_success) ++report.confusion.true_negative;
    }
    if (var_a == 0.0)
        throw std::invalid_argument("degenerate evaluation: actual values have zero variance");

    report.rms_error = std::sqrt(sq / n);
    report.rms_relative_error = n_rel == 0 ? 0.0 : std::sqrt(sq_rel / n_rel);
    if (var_p > 0.0) {
        const double rho = cov / std::sqrt(var_p * var_a);
        report.pearson_correlation = rho;
        report.linear_fit_slope = cov / var_p;
        report.linear_fit_r2 = rho * rho;
    }
    return report;
}

}  // namespace votedyn
