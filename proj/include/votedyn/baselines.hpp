#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "votedyn/solver.hpp"
#include "votedyn/stochastic.hpp"

namespace votedyn {

/// Least-squares line through the early samples, evaluated at the horizon
/// and floored at the last observation (negative drift never shrinks a
/// cumulative count).
inline double extrapolate(const Trajectory& early, double horizon)
{
    if (early.size() < 2) throw std::invalid_argument("need at least 2 samples");
    double mean_t = 0.0, mean_v = 0.0;
    for (const auto& p : early) {
        mean_t += p.t;
        mean_v += p.votes;
    }
    mean_t /= static_cast<double>(early.size());
    mean_v /= static_cast<double>(early.size());
    double cov = 0.0, var = 0.0;
    for (const auto& p : early) {
        cov += (p.t - mean_t) * (p.votes - mean_v);
        var += (p.t - mean_t) * (p.t - mean_t);
    }
    if (var == 0.0) throw std::invalid_argument("degenerate samples: all at the same time");
    const double slope = cov / var;
    const auto last = std::max_element(early.begin(), early.end(),
                                       [](const TrajectoryPoint& x, const TrajectoryPoint& y) {
                                           return x.t < y.t;
                                       });
    return std::max(last->votes + slope * (horizon - last->t), last->votes);
}

/// Extrapolation over the first min(k, total) events of a stream.
inline double extrapolate_events(const VoteEventStream& stream, int k, double horizon)
{
    validate_stream(stream);
    const int m = std::min<int>(k, static_cast<int>(stream.events.size()));
    Trajectory early;
    early.reserve(m);
    for (int i = 0; i < m; ++i)
        early.push_back({stream.events[i].t, static_cast<double>(stream.events[i].index)});
    return extrapolate(early, horizon);
}

/// Friends-channel votes among events 2..min(k, total); the submitter's own
/// vote never counts as a fan vote.
inline int fan_vote_count(const VoteEventStream& stream, int k = 10)
{
    validate_stream(stream);
    int count = 0;
    const int m = std::min<int>(k, static_cast<int>(stream.events.size()));
    for (int i = 1; i < m; ++i)
        if (stream.events[i].via_friends) ++count;
    return count;
}

struct InfluenceFeatures {
    int fan_votes_first10 = 0;
    int submitter_fans = 0;
    std::optional<bool> success;  ///< label; absent for to-be-classified rows

    void validate() const
    {
        if (fan_votes_first10 < 0 || fan_votes_first10 > 10)
            throw std::domain_error("fan_votes_first10 must lie in [0, 10]");
        if (submitter_fans < 0)
            throw std::domain_error("submitter_fans must be nonnegative");
    }
};

/// Axis-aligned binary classifier over (fan_votes_first10, submitter_fans).
/// Nodes are stored in a flat vector, root first; feature < 0 marks a leaf.
struct TreeNode {
    int feature = -1;        ///< 0 = fan_votes_first10, 1 = submitter_fans, -1 = leaf
    double threshold = 0.0;  ///< descend left when value < threshold
    int left = -1;
    int right = -1;
    bool label = false;
    int n_true = 0;   ///< training rows at this node
    int n_false = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    int max_depth = 3;
    int min_leaf = 5;
};

namespace detail {

inline double feature_value(const InfluenceFeatures& f, int feature)
{
    return feature == 0 ? static_cast<double>(f.fan_votes_first10)
                        : static_cast<double>(f.submitter_fans);
}

inline double gini(int n_true, int n_false)
{
    const double n = n_true + n_false;
    if (n == 0.0) return 0.0;
    const double p = n_true / n;
    return 2.0 * p * (1.0 - p);
}

inline int grow_tree(DecisionTree& tree, std::vector<InfluenceFeatures>& rows,
                     int begin, int end, int depth)
{
    int n_true = 0;
    for (int i = begin; i < end; ++i)
        if (*rows[i].success) ++n_true;
    const int n = end - begin;
    const int n_false = n - n_true;

    TreeNode node;
    node.n_true = n_true;
    node.n_false = n_false;
    node.label = n_true > n_false;  // tie -> false

    bool split_found = false;
    int best_feature = 0;
    double best_threshold = 0.0;
    double best_score = gini(n_true, n_false);  // require strict improvement

    if (depth < tree.max_depth && n >= 2 * tree.min_leaf && n_true > 0 && n_false > 0) {
        for (int feature = 0; feature < 2; ++feature) {
            std::sort(rows.begin() + begin, rows.begin() + end,
                      [feature](const InfluenceFeatures& x, const InfluenceFeatures& y) {
                          return feature_value(x, feature) < feature_value(y, feature);
                      });
            int left_true = 0;
            for (int i = begin + 1; i < end; ++i) {
                if (*rows[i - 1].success) ++left_true;
                const double lo = feature_value(rows[i - 1], feature);
                const double hi = feature_value(rows[i], feature);
                if (lo == hi) continue;  // no boundary between equal values
                const int n_left = i - begin;
                const int n_right = n - n_left;
                if (n_left < tree.min_leaf || n_right < tree.min_leaf) continue;
                const double score =
                    (n_left * gini(left_true, n_left - left_true) +
                     n_right * gini(n_true - left_true, n_right - (n_true - left_true))) /
                    n;
                // Candidates arrive in (feature, threshold) order, so keeping
                // the incumbent on ties breaks ties toward the lower pair.
                if (score < best_score - 1e-12) {
                    best_score = score;
                    best_feature = feature;
                    best_threshold = 0.5 * (lo + hi);
                    split_found = true;
                }
            }
        }
    }

    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);
    if (!split_found) return index;

    std::sort(rows.begin() + begin, rows.begin() + end,
              [best_feature](const InfluenceFeatures& x, const InfluenceFeatures& y) {
                  return feature_value(x, best_feature) < feature_value(y, best_feature);
              });
    int mid = begin;
    while (mid < end && feature_value(rows[mid], best_feature) < best_threshold) ++mid;

    tree.nodes[index].feature = best_feature;
    tree.nodes[index].threshold = best_threshold;
    const int left = grow_tree(tree, rows, begin, mid, depth + 1);
    tree.nodes[index].left = left;
    const int right = grow_tree(tree, rows, mid, end, depth + 1);
    tree.nodes[index].right = right;
    return index;
}

}  // namespace detail

/// Greedy CART-style induction on Gini impurity. Deterministic: rows are
/// sorted canonically first, split ties go to (lower feature, lower
/// threshold), and only strictly impurity-reducing splits are taken.
inline DecisionTree train_tree(const std::vector<InfluenceFeatures>& dataset,
                               int max_depth = 3, int min_leaf = 5)
{
    if (max_depth < 0 || min_leaf < 1)
        throw std::invalid_argument("max_depth must be >= 0 and min_leaf >= 1");
    int n_true = 0;
    for (const auto& row : dataset) {
        row.validate();
        if (!row.success.has_value())
            throw std::invalid_argument("training rows must be labeled");
        if (*row.success) ++n_true;
    }
    if (n_true == 0 || n_true == static_cast<int>(dataset.size()))
        throw std::invalid_argument("training set must contain both classes");

    std::vector<InfluenceFeatures> rows = dataset;
    std::sort(rows.begin(), rows.end(),
              [](const InfluenceFeatures& x, const InfluenceFeatures& y) {
                  return std::tie(x.fan_votes_first10, x.submitter_fans, *x.success) <
                         std::tie(y.fan_votes_first10, y.submitter_fans, *y.success);
              });

    DecisionTree tree;
    tree.max_depth = max_depth;
    tree.min_leaf = min_leaf;
    detail::grow_tree(tree, rows, 0, static_cast<int>(rows.size()), 0);
    return tree;
}

inline bool classify(const DecisionTree& tree, const InfluenceFeatures& features)
{
    if (tree.nodes.empty()) throw std::invalid_argument("tree is empty");
    features.validate();
    int at = 0;
    while (tree.nodes[at].feature >= 0) {
        const TreeNode& node = tree.nodes[at];
        at = detail::feature_value(features, node.feature) < node.threshold ? node.left
                                                                            : node.right;
    }
    return tree.nodes[at].label;
}

}  // namespace votedyn
