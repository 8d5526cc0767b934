#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "votedyn/baselines.hpp"
#include "votedyn/metrics.hpp"
#include "votedyn/model.hpp"
#include "votedyn/prediction.hpp"
#include "votedyn/stochastic.hpp"

namespace votedyn {

enum class EvalMethod { Model, Extrapolate, Tree };

inline EvalMethod eval_method_from_string(const std::string& name)
{
    if (name == "model") return EvalMethod::Model;
    if (name == "extrapolate") return EvalMethod::Extrapolate;
    if (name == "tree") return EvalMethod::Tree;
    throw std::invalid_argument("unknown method '" + name + "' (model|extrapolate|tree)");
}

inline double actual_final_votes(const VoteEventStream& stream)
{
    return static_cast<double>(stream.events.size());
}

inline InfluenceFeatures influence_features(const VoteEventStream& stream,
                                            double success_threshold = 505.0)
{
    InfluenceFeatures f;
    f.fan_votes_first10 = fan_vote_count(stream, 10);
    f.submitter_fans = stream.story.submitter_fans;
    f.success = actual_final_votes(stream) > success_threshold;
    return f;
}

/// (predicted, actual) final-vote pairs for a vote-count predictor.
/// Stories with only the submitter's event carry no fit/extrapolation
/// information and are skipped — identically for both methods, so the
/// resulting reports stay comparable.
inline std::vector<std::pair<double, double>> prediction_pairs(
    const std::vector<VoteEventStream>& streams, EvalMethod method, int first_k,
    const ModelParams& params)
{
    if (method == EvalMethod::Tree)
        throw std::invalid_argument("tree method has no vote-count predictions");
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(streams.size());
    for (const auto& stream : streams) {
        if (stream.events.size() < 2) continue;
        const double actual = actual_final_votes(stream);
        const double predicted =
            method == EvalMethod::Model
                ? predict(stream, first_k, params, stream.horizon).predicted_final_votes
                : extrapolate_events(stream, first_k, stream.horizon);
        pairs.emplace_back(predicted, actual);
    }
    return pairs;
}

/// Scorecard for one method over a dataset.
///
/// Model and extrapolation predict final vote counts, so the full numeric
/// report applies. The decision tree only classifies success: it is trained
/// on the first half of the stories (by index) and scored on the second
/// half, and the vote-scale fields of its report are vacuous (NaN /
/// absent) by construction.
inline EvalReport evaluate_dataset(const std::vector<VoteEventStream>& streams,
                                   EvalMethod method, int first_k, const ModelParams& params,
                                   double success_threshold = 505.0)
{
    if (method != EvalMethod::Tree)
        return evaluate(prediction_pairs(streams, method, first_k, params),
                        success_threshold);

    if (streams.size() < 4)
        throw std::invalid_argument("tree evaluation needs at least 4 stories");
    const std::size_t split = streams.size() / 2;
    std::vector<InfluenceFeatures> train;
    for (std::size_t i = 0; i < split; ++i)
        train.push_back(influence_features(streams[i], success_threshold));
    const DecisionTree tree = train_tree(train);

    EvalReport report;
    report.success_threshold = success_threshold;
    report.n_stories = static_cast<long>(streams.size() - split);
    report.rms_error = std::nan("");
    report.rms_relative_error = std::nan("");
    for (std::size_t i = split; i < streams.size(); ++i) {
        const InfluenceFeatures f = influence_features(streams[i], success_threshold);
        const bool predicted = classify(tree, f);
        if (predicted && *f.success) ++report.confusion.true_positive;
        if (predicted && !*f.success) ++report.confusion.false_positive;
        if (!predicted && *f.success) ++report.confusion.false_negative;
        if (!predicted && !*f.success) ++report.confusion.true_negative;
    }
    return report;
}

}  // namespace votedyn
