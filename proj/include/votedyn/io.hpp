#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "votedyn/baselines.hpp"
#include "votedyn/estimation.hpp"
#include "votedyn/metrics.hpp"
#include "votedyn/model.hpp"
#include "votedyn/prediction.hpp"
#include "votedyn/solver.hpp"
#include "votedyn/stochastic.hpp"
#include "votedyn/synthgen.hpp"

namespace votedyn {

using nlohmann::json;

// ---------------------------------------------------------------- numbers

/// Shortest decimal that round-trips the double (CSV cells).
inline std::string format_double(double value)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::runtime_error("malformed number: '" + std::string(text) + "'");
    return value;
}

namespace detail {

inline json opt_to_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

inline std::optional<double> opt_from_json(const json& j)
{
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace detail

// ----------------------------------------------------------- model params

inline json params_to_json(const ModelParams& p)
{
    return json{{"nu", p.nu},
                {"c", p.c},
                {"omega", p.omega},
                {"mu", p.mu},
                {"lambda", p.lambda},
                {"a", p.a},
                {"b", p.b},
                {"h", p.h},
                {"v_upcoming", p.v_upcoming},
                {"v_front", p.v_front},
                {"upcoming_window", p.upcoming_window}};
}

inline ModelParams params_from_json(const json& j)
{
    ModelParams p;
    p.nu = j.at("nu").get<double>();
    p.c = j.at("c").get<double>();
    p.omega = j.at("omega").get<double>();
    p.mu = j.at("mu").get<double>();
    p.lambda = j.at("lambda").get<double>();
    p.a = j.at("a").get<double>();
    p.b = j.at("b").get<double>();
    p.h = j.at("h").get<int>();
    p.v_upcoming = j.at("v_upcoming").get<double>();
    p.v_front = j.at("v_front").get<double>();
    p.upcoming_window = j.value("upcoming_window", 1440.0);
    p.validate();
    return p;
}

inline ModelParams read_params(const std::filesystem::path& path)
{
    return params_from_json(json::parse(detail::read_text_file(path)));
}

// ------------------------------------------------------------ trajectories

inline std::string trajectory_to_csv(const Trajectory& traj)
{
    std::string out = "t_min,votes\n";
    for (const auto& p : traj)
        out += format_double(p.t) + "," + format_double(p.votes) + "\n";
    return out;
}

inline Trajectory trajectory_from_csv(const std::string& text)
{
    const auto lines = detail::split_lines(text);
    if (lines.empty() || lines.front() != "t_min,votes")
        throw std::runtime_error("trajectory CSV must start with header 't_min,votes'");
    Trajectory traj;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto comma = lines[i].find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed trajectory row: '" + lines[i] + "'");
        traj.push_back({parse_double(std::string_view(lines[i]).substr(0, comma)),
                        parse_double(std::string_view(lines[i]).substr(comma + 1))});
    }
    validate_trajectory(traj);
    return traj;
}

inline Trajectory read_trajectory(const std::filesystem::path& path)
{
    return trajectory_from_csv(detail::read_text_file(path));
}

inline void write_trajectory(const std::filesystem::path& path, const Trajectory& traj)
{
    detail::write_text_file(path, trajectory_to_csv(traj));
}

// ------------------------------------------------------------ solve result

inline json solve_result_to_json(const SolveResult& sol)
{
    json traj = json::array();
    for (const auto& p : sol.trajectory) traj.push_back(json::array({p.t, p.votes}));
    return json{{"promoted_at", detail::opt_to_json(sol.promoted_at)},
                {"final_votes", sol.final_votes},
                {"final_fan_pool", sol.final_fan_pool},
                {"trajectory", std::move(traj)}};
}

// ------------------------------------------------------------ event streams

/// JSON-lines: a header record, then one record per event.
inline std::string stream_to_jsonl(const VoteEventStream& stream)
{
    const json header{{"story", json{{"r", stream.story.r},
                                     {"submitter_fans", stream.story.submitter_fans}}},
                      {"seed", stream.seed},
                      {"horizon", stream.horizon},
                      {"promoted_at", detail::opt_to_json(stream.promoted_at)},
                      {"final_fan_pool", stream.final_fan_pool}};
    std::string out = header.dump() + "\n";
    for (const auto& ev : stream.events) {
        const json rec{{"t", ev.t}, {"index", ev.index}, {"via_friends", ev.via_friends}};
        out += rec.dump() + "\n";
    }
    return out;
}

inline VoteEventStream stream_from_jsonl(const std::string& text)
{
    const auto lines = detail::split_lines(text);
    if (lines.empty()) throw std::runtime_error("empty event stream file");
    const json header = json::parse(lines.front());
    VoteEventStream stream;
    stream.story.r = header.at("story").at("r").get<double>();
    stream.story.submitter_fans = header.at("story").at("submitter_fans").get<int>();
    stream.seed = header.at("seed").get<std::uint64_t>();
    stream.horizon = header.at("horizon").get<double>();
    stream.promoted_at = detail::opt_from_json(header.at("promoted_at"));
    stream.final_fan_pool = header.value("final_fan_pool", 0.0);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const json rec = json::parse(lines[i]);
        stream.events.push_back({rec.at("t").get<double>(), rec.at("index").get<int>(),
                                 rec.at("via_friends").get<bool>()});
    }
    validate_stream(stream);
    return stream;
}

inline VoteEventStream read_stream(const std::filesystem::path& path)
{
    return stream_from_jsonl(detail::read_text_file(path));
}

inline void write_stream(const std::filesystem::path& path, const VoteEventStream& stream)
{
    detail::write_text_file(path, stream_to_jsonl(stream));
}

// ------------------------------------------------------------- fit / predict

inline json fit_result_to_json(const FitResult& fit)
{
    return json{{"r_hat", fit.r_hat},
                {"rms_error", fit.rms_error},
                {"rms_relative_error", fit.rms_relative_error},
                {"n_obs", fit.n_obs}};
}

inline json prediction_to_json(const Prediction& p)
{
    return json{{"r_hat", p.r_hat},
                {"predicted_final_votes", p.predicted_final_votes},
                {"predicted_promoted", p.predicted_promoted},
                {"predicted_promotion_time", detail::opt_to_json(p.predicted_promotion_time)},
                {"horizon", p.horizon}};
}

// -------------------------------------------------------------- eval report

inline json eval_report_to_json(const EvalReport& r)
{
    const auto num_or_null = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    return json{{"pearson_correlation",
                 r.pearson_correlation ? num_or_null(*r.pearson_correlation) : json(nullptr)},
                {"rms_error", num_or_null(r.rms_error)},
                {"rms_relative_error", num_or_null(r.rms_relative_error)},
                {"linear_fit_slope",
                 r.linear_fit_slope ? num_or_null(*r.linear_fit_slope) : json(nullptr)},
                {"linear_fit_r2", r.linear_fit_r2 ? num_or_null(*r.linear_fit_r2) : json(nullptr)},
                {"confusion", json{{"true_positive", r.confusion.true_positive},
                                   {"false_positive", r.confusion.false_positive},
                                   {"true_negative", r.confusion.true_negative},
                                   {"false_negative", r.confusion.false_negative}}},
                {"accuracy", r.confusion.accuracy()},
                {"success_threshold", r.success_threshold},
                {"n_stories", r.n_stories}};
}

// ------------------------------------------------------------ decision tree

namespace detail {

inline json tree_node_to_json(const DecisionTree& tree, int index)
{
    const TreeNode& node = tree.nodes.at(index);
    if (node.feature < 0)
        return json{{"label", node.label}, {"n_true", node.n_true}, {"n_false", node.n_false}};
    return json{{"feature", node.feature == 0 ? "fan_votes_first10" : "submitter_fans"},
                {"threshold", node.threshold},
                {"n_true", node.n_true},
                {"n_false", node.n_false},
                {"left", tree_node_to_json(tree, node.left)},
                {"right", tree_node_to_json(tree, node.right)}};
}

inline int tree_node_from_json(DecisionTree& tree, const json& j)
{
    TreeNode node;
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);
    tree.nodes[index].n_true = j.at("n_true").get<int>();
    tree.nodes[index].n_false = j.at("n_false").get<int>();
    if (j.contains("feature")) {
        const std::string feature = j.at("feature").get<std::string>();
        if (feature != "fan_votes_first10" && feature != "submitter_fans")
            throw std::runtime_error("unknown tree feature: " + feature);
        tree.nodes[index].feature = feature == "fan_votes_first10" ? 0 : 1;
        tree.nodes[index].threshold = j.at("threshold").get<double>();
        const int left = tree_node_from_json(tree, j.at("left"));
        tree.nodes[index].left = left;
        const int right = tree_node_from_json(tree, j.at("right"));
        tree.nodes[index].right = right;
    } else {
        tree.nodes[index].label = j.at("label").get<bool>();
    }
    return index;
}

}  // namespace detail

inline json tree_to_json(const DecisionTree& tree)
{
    if (tree.nodes.empty()) throw std::invalid_argument("tree is empty");
    return json{{"max_depth", tree.max_depth},
                {"min_leaf", tree.min_leaf},
                {"root", detail::tree_node_to_json(tree, 0)}};
}

inline DecisionTree tree_from_json(const json& j)
{
    DecisionTree tree;
    tree.max_depth = j.at("max_depth").get<int>();
    tree.min_leaf = j.at("min_leaf").get<int>();
    detail::tree_node_from_json(tree, j.at("root"));
    return tree;
}

// -------------------------------------------------------- feature datasets

inline std::string features_to_csv(const std::vector<InfluenceFeatures>& rows)
{
    std::string out = "fan_votes_first10,submitter_fans,success\n";
    for (const auto& row : rows) {
        if (!row.success.has_value())
            throw std::invalid_argument("feature CSV rows must be labeled");
        out += std::to_string(row.fan_votes_first10) + "," +
               std::to_string(row.submitter_fans) + "," + (*row.success ? "1" : "0") + "\n";
    }
    return out;
}

inline std::vector<InfluenceFeatures> features_from_csv(const std::string& text)
{
    const auto lines = detail::split_lines(text);
    if (lines.empty() || lines.front() != "fan_votes_first10,submitter_fans,success")
        throw std::runtime_error(
            "feature CSV must start with header 'fan_votes_first10,submitter_fans,success'");
    std::vector<InfluenceFeatures> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto c1 = lines[i].find(',');
        const auto c2 = c1 == std::string::npos ? c1 : lines[i].find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw std::runtime_error("malformed feature row: '" + lines[i] + "'");
        InfluenceFeatures row;
        row.fan_votes_first10 =
            static_cast<int>(parse_double(std::string_view(lines[i]).substr(0, c1)));
        row.submitter_fans = static_cast<int>(
            parse_double(std::string_view(lines[i]).substr(c1 + 1, c2 - c1 - 1)));
        const std::string_view label = std::string_view(lines[i]).substr(c2 + 1);
        if (label != "0" && label != "1")
            throw std::runtime_error("feature label must be 0 or 1, got '" +
                                     std::string(label) + "'");
        row.success = label == "1";
        row.validate();
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------- population spec

inline json fan_distribution_to_json(const FanDistribution& d)
{
    switch (d.kind) {
    case FanDistKind::Constant:
        return json{{"kind", "constant"}, {"value", d.constant_value}};
    case FanDistKind::Uniform:
        return json{{"kind", "uniform"}, {"min", d.uniform_min}, {"max", d.uniform_max}};
    case FanDistKind::PowerLaw:
        return json{{"kind", "power_law"}, {"exponent", d.power_exponent}, {"cap", d.power_cap}};
    }
    throw std::logic_error("unreachable");
}

inline FanDistribution fan_distribution_from_json(const json& j)
{
    FanDistribution d;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        d.kind = FanDistKind::Constant;
        d.constant_value = j.at("value").get<long>();
    } else if (kind == "uniform") {
        d.kind = FanDistKind::Uniform;
        d.uniform_min = j.at("min").get<long>();
        d.uniform_max = j.at("max").get<long>();
    } else if (kind == "power_law") {
        d.kind = FanDistKind::PowerLaw;
        d.power_exponent = j.at("exponent").get<double>();
        d.power_cap = j.at("cap").get<long>();
    } else {
        throw std::runtime_error("unknown fan distribution kind: " + kind);
    }
    d.validate();
    return d;
}

inline json population_spec_to_json(const PopulationSpec& spec)
{
    return json{{"n_stories", spec.n_stories},
                {"mean_log", spec.mean_log},
                {"sd_log", spec.sd_log},
                {"fans", fan_distribution_to_json(spec.fans)},
                {"horizon", spec.horizon},
                {"seed", spec.seed}};
}

inline PopulationSpec population_spec_from_json(const json& j)
{
    PopulationSpec spec;
    spec.n_stories = j.at("n_stories").get<int>();
    spec.mean_log = j.at("mean_log").get<double>();
    spec.sd_log = j.at("sd_log").get<double>();
    spec.fans = fan_distribution_from_json(j.at("fans"));
    spec.horizon = j.at("horizon").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.validate();
    return spec;
}

inline PopulationSpec read_population_spec(const std::filesystem::path& path)
{
    return population_spec_from_json(json::parse(detail::read_text_file(path)));
}

// -------------------------------------------------------------- dataset dir

struct Dataset {
    PopulationSpec spec;
    ModelParams params;
    std::vector<VoteEventStream> streams;  ///< by story index
};

namespace detail {

inline std::string story_file_name(std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "story_%05zu.jsonl", index);
    return buf;
}

}  // namespace detail

/// Lay a dataset out as one JSONL stream per story plus manifest.json
/// carrying the spec echo and the ground truth (true r, S, promotion time,
/// final votes) for evaluation.
inline void write_dataset(const std::filesystem::path& dir, const PopulationSpec& spec,
                          const ModelParams& params,
                          const std::vector<VoteEventStream>& streams)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    json stories = json::array();
    for (std::size_t i = 0; i < streams.size(); ++i) {
        validate_stream(streams[i]);
        const std::string name = detail::story_file_name(i);
        detail::write_text_file(dir / name, stream_to_jsonl(streams[i]));
        stories.push_back(json{{"index", i},
                               {"file", name},
                               {"r", streams[i].story.r},
                               {"submitter_fans", streams[i].story.submitter_fans},
                               {"seed", streams[i].seed},
                               {"promoted_at", detail::opt_to_json(streams[i].promoted_at)},
                               {"final_votes", streams[i].events.size()}});
    }
    const json manifest{{"spec", population_spec_to_json(spec)},
                        {"params", params_to_json(params)},
                        {"stories", std::move(stories)}};
    detail::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

inline Dataset read_dataset(const std::filesystem::path& dir)
{
    const json manifest = json::parse(detail::read_text_file(dir / "manifest.json"));
    Dataset ds;
    ds.spec = population_spec_from_json(manifest.at("spec"));
    ds.params = params_from_json(manifest.at("params"));
    for (const auto& entry : manifest.at("stories")) {
        VoteEventStream stream = read_stream(dir / entry.at("file").get<std::string>());
        if (stream.events.size() != entry.at("final_votes").get<std::size_t>())
            throw std::runtime_error("manifest final_votes disagrees with stream " +
                                     entry.at("file").get<std::string>());
        ds.streams.push_back(std::move(stream));
    }
    return ds;
}

}  // namespace votedyn
