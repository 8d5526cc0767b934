// Command-line front end: every subcommand is a thin wrapper over the
// library, so identical inputs give byte-identical outputs.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "votedyn/votedyn.hpp"

namespace {

using votedyn::json;

votedyn::StoryParams parse_story(const std::string& text)
{
    votedyn::StoryParams story{0.0, 0};
    bool have_r = false, have_s = false;
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t comma = text.find(',', at);
        if (comma == std::string::npos) comma = text.size();
        const std::string part = text.substr(at, comma - at);
        if (part.rfind("r=", 0) == 0) {
            story.r = votedyn::parse_double(std::string_view(part).substr(2));
            have_r = true;
        } else if (part.rfind("S=", 0) == 0) {
            story.submitter_fans =
                static_cast<int>(votedyn::parse_double(std::string_view(part).substr(2)));
            have_s = true;
        } else {
            throw std::invalid_argument("story spec part '" + part +
                                        "' is not r=<value> or S=<value>");
        }
        at = comma + 1;
    }
    if (!have_r || !have_s)
        throw std::invalid_argument("story spec must provide both r= and S= (e.g. r=0.3,S=200)");
    story.validate();  // r=0 is legal here: simulate/solve support the degenerate story
    return story;
}

votedyn::ModelParams load_params(const std::string& path)
{
    if (path.empty()) return votedyn::ModelParams{};  // bundled defaults
    return votedyn::read_params(path);
}

void emit(const std::string& out_path, const std::string& text)
{
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    votedyn::detail::write_text_file(out_path, text);
}

// Observations for fit: trajectory CSV or event-stream JSONL, by extension.
votedyn::Trajectory load_observations(const std::string& path, int first_k, int fans_flag,
                                      int& fans_out)
{
    if (std::filesystem::path(path).extension() == ".jsonl") {
        const votedyn::VoteEventStream stream = votedyn::read_stream(path);
        fans_out = fans_flag >= 0 ? fans_flag : stream.story.submitter_fans;
        const int m = first_k > 0
                          ? std::min<int>(first_k, static_cast<int>(stream.events.size()))
                          : static_cast<int>(stream.events.size());
        votedyn::Trajectory obs;
        for (int i = 0; i < m; ++i)
            obs.push_back({stream.events[i].t, static_cast<double>(stream.events[i].index)});
        return obs;
    }
    if (fans_flag < 0)
        throw std::invalid_argument("--fans is required with trajectory CSV observations");
    fans_out = fans_flag;
    votedyn::Trajectory obs = votedyn::read_trajectory(path);
    if (first_k > 0 && static_cast<int>(obs.size()) > first_k)
        obs.resize(first_k);
    return obs;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"stochastic vote-dynamics toolkit: solve, simulate, fit, predict, evaluate"};
    app.require_subcommand(1);

    std::string params_path, story_spec, out_path, format = "csv";
    std::string obs_path, events_path, dataset_dir, spec_path, fans_grid, method = "model";
    double horizon = 2880.0, step = 1.0, threshold = 505.0;
    double boundary_horizon = 1440.0;
    int runs = 1, first_k = 0, fans = -1;
    std::uint64_t seed = 0;

    auto* sim = app.add_subcommand("simulate", "integrate the deterministic dynamics");
    sim->add_option("--params", params_path, "model parameter JSON (default: built-in)");
    sim->add_option("--story", story_spec, "story spec, e.g. r=0.3,S=200")->required();
    sim->add_option("--horizon", horizon, "minutes to integrate (default 2880)");
    sim->add_option("--step", step, "integration step in minutes (default 1)");
    sim->add_option("--format", format, "csv (trajectory) or json (full result)")
        ->check(CLI::IsMember({"csv", "json"}));
    sim->add_option("--out", out_path, "output file (default stdout)");
    sim->callback([&] {
        const auto result =
            votedyn::solve(parse_story(story_spec), load_params(params_path), horizon, step);
        emit(out_path, format == "csv" ? votedyn::trajectory_to_csv(result.trajectory)
                                       : votedyn::solve_result_to_json(result).dump(2) + "\n");
    });

    auto* mc = app.add_subcommand("mc", "draw stochastic vote-event streams");
    mc->add_option("--params", params_path, "model parameter JSON (default: built-in)");
    mc->add_option("--story", story_spec, "story spec, e.g. r=0.3,S=200")->required();
    mc->add_option("--horizon", horizon, "minutes to simulate (default 2880)");
    mc->add_option("--runs", runs, "number of independent streams (default 1)");
    mc->add_option("--seed", seed, "master seed (default 0)");
    mc->add_option("--out", out_path, "output file, or directory when --runs > 1");
    mc->callback([&] {
        const auto story = parse_story(story_spec);
        const auto params = load_params(params_path);
        if (runs < 1) throw std::invalid_argument("--runs must be at least 1");
        if (runs == 1) {
            emit(out_path, votedyn::stream_to_jsonl(
                               votedyn::simulate(story, params, horizon, seed)));
            return;
        }
        if (out_path.empty())
            throw std::invalid_argument("--out DIR is required when --runs > 1");
        std::filesystem::create_directories(out_path);
        for (int i = 0; i < runs; ++i) {
            const auto stream =
                votedyn::simulate(story, params, horizon, votedyn::derive_seed(seed, i));
            char name[32];
            std::snprintf(name, sizeof(name), "run_%05d.jsonl", i);
            votedyn::write_stream(std::filesystem::path(out_path) / name, stream);
        }
    });

    auto* fit = app.add_subcommand("fit", "recover interestingness from observed votes");
    fit->add_option("--obs", obs_path, "trajectory CSV or event-stream JSONL")->required();
    fit->add_option("--fans", fans, "submitter fan count (required for CSV)");
    fit->add_option("--first-k", first_k, "use only the first K observations/events");
    fit->add_option("--params", params_path, "model parameter JSON (default: built-in)");
    fit->add_option("--horizon", horizon, "data-admission cap in minutes (default 2880)");
    fit->add_option("--out", out_path, "output file (default stdout)");
    fit->callback([&] {
        int used_fans = 0;
        const auto obs = load_observations(obs_path, first_k, fans, used_fans);
        const auto result =
            votedyn::fit_r(obs, used_fans, load_params(params_path), horizon);
        emit(out_path, votedyn::fit_result_to_json(result).dump(2) + "\n");
    });

    auto* predict = app.add_subcommand("predict", "forecast final votes from early events");
    predict->add_option("--events", events_path, "event-stream JSONL")->required();
    predict->add_option("--fans", fans, "override the stream's submitter fan count");
    predict->add_option("--first-k", first_k, "events to fit on (default 20)");
    predict->add_option("--params", params_path, "model parameter JSON (default: built-in)");
    predict->add_option("--horizon", horizon, "forecast horizon in minutes (default 2880)");
    predict->add_option("--out", out_path, "output file (default stdout)");
    predict->callback([&] {
        votedyn::VoteEventStream stream = votedyn::read_stream(events_path);
        if (fans >= 0) stream.story.submitter_fans = fans;
        const auto params = load_params(params_path);
        const auto result =
            votedyn::predict(stream, first_k > 0 ? first_k : 20, params, horizon);
        emit(out_path, votedyn::prediction_to_json(result).dump(2) + "\n");
    });

    auto* boundary = app.add_subcommand("boundary", "promotion boundary r_min(S)");
    boundary->add_option("--fans-grid", fans_grid, "comma-separated fan counts")->required();
    boundary->add_option("--params", params_path, "model parameter JSON (default: built-in)");
    boundary->add_option("--horizon", boundary_horizon,
                         "promotion search horizon in minutes (default 1440)");
    boundary->add_option("--out", out_path, "output file (default stdout)");
    boundary->callback([&] {
        const auto params = load_params(params_path);
        std::string csv = "submitter_fans,r_min\n";
        std::size_t at = 0;
        while (at <= fans_grid.size()) {
            std::size_t comma = fans_grid.find(',', at);
            if (comma == std::string::npos) comma = fans_grid.size();
            const int s = static_cast<int>(
                votedyn::parse_double(std::string_view(fans_grid).substr(at, comma - at)));
            const auto r_min = votedyn::promotion_boundary(s, params, boundary_horizon);
            csv += std::to_string(s) + "," +
                   (r_min ? votedyn::format_double(*r_min) : std::string("never")) + "\n";
            at = comma + 1;
        }
        emit(out_path, csv);
    });

    auto* generate = app.add_subcommand("generate", "synthesize a labeled story dataset");
    generate->add_option("--spec", spec_path, "population spec JSON")->required();
    generate->add_option("--out", dataset_dir, "dataset directory")->required();
    generate->add_option("--params", params_path, "model parameter JSON (default: built-in)");
    generate->callback([&] {
        const auto spec = votedyn::read_population_spec(spec_path);
        const auto params = load_params(params_path);
        votedyn::write_dataset(dataset_dir, spec, params,
                               votedyn::generate_dataset(spec, params));
    });

    auto* evaluate = app.add_subcommand("evaluate", "score a predictor on a dataset");
    evaluate->add_option("--dataset", dataset_dir, "dataset directory")->required();
    evaluate->add_option("--method", method, "model, extrapolate, or tree")
        ->check(CLI::IsMember({"model", "extrapolate", "tree"}));
    evaluate->add_option("--first-k", first_k, "events the predictor sees (default 20)");
    evaluate->add_option("--threshold", threshold, "success threshold in votes (default 505)");
    evaluate->add_option("--out", out_path, "output file (default stdout)");
    evaluate->callback([&] {
        const auto ds = votedyn::read_dataset(dataset_dir);
        const auto report = votedyn::evaluate_dataset(
            ds.streams, votedyn::eval_method_from_string(method),
            first_k > 0 ? first_k : 20, ds.params, threshold);
        json out = votedyn::eval_report_to_json(report);
        out["method"] = method;
        emit(out_path, out.dump(2) + "\n");
    });

    auto* rdist = app.add_subcommand("rdist", "fitted-r distribution over a dataset");
    rdist->add_option("--dataset", dataset_dir, "dataset directory")->required();
    rdist->add_option("--first-k", first_k, "fit on only the first K events (default: all)");
    rdist->add_option("--out", out_path, "output file (default stdout)");
    rdist->callback([&] {
        const auto ds = votedyn::read_dataset(dataset_dir);
        json stories = json::array();
        std::vector<double> r_values;
        long skipped = 0;
        for (std::size_t i = 0; i < ds.streams.size(); ++i) {
            const auto& stream = ds.streams[i];
            if (stream.events.size() < 2) {
                ++skipped;  // only the submitter's vote: nothing to fit
                continue;
            }
            const int k = first_k > 0 ? first_k : static_cast<int>(stream.events.size());
            const auto fitres =
                votedyn::fit_r_from_events(stream, k, ds.params, stream.horizon);
            r_values.push_back(fitres.r_hat);
            stories.push_back(json{{"index", i},
                                   {"r_hat", fitres.r_hat},
                                   {"r_true", stream.story.r},
                                   {"rms_error", fitres.rms_error}});
        }
        json out{{"stories", std::move(stories)}, {"n_skipped", skipped}};
        if (r_values.size() >= 2) {
            const auto ln = votedyn::fit_lognormal(r_values);
            out["lognormal"] = json{{"mean_log", ln.mean_log}, {"sd_log", ln.sd_log}};
        } else {
            out["lognormal"] = nullptr;
        }
        emit(out_path, out.dump(2) + "\n");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
