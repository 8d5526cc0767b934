#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "votedyn/model.hpp"
#include "votedyn/rng.hpp"
#include "votedyn/stochastic.hpp"

namespace votedyn {

enum class FanDistKind { Constant, Uniform, PowerLaw };

/// Submitter-fan-count distribution. PowerLaw is discrete over 1..cap with
/// p(k) proportional to k^(-exponent) — the heavy-tailed default; Constant
/// and Uniform (inclusive integer range) are the controlled alternatives.
struct FanDistribution {
    FanDistKind kind = FanDistKind::PowerLaw;
    long constant_value = 100;
    long uniform_min = 0;
    long uniform_max = 1000;
    double power_exponent = 2.0;
    long power_cap = 10000;

    void validate() const
    {
        switch (kind) {
        case FanDistKind::Constant:
            if (constant_value < 0) throw std::domain_error("constant fan count must be >= 0");
            break;
        case FanDistKind::Uniform:
            if (uniform_min < 0 || uniform_max < uniform_min)
                throw std::domain_error("uniform fan range must satisfy 0 <= min <= max");
            break;
        case FanDistKind::PowerLaw:
            if (power_cap < 1) throw std::domain_error("power-law cap must be >= 1");
            if (!(power_exponent > 0.0))
                throw std::domain_error("power-law exponent must be positive");
            break;
        }
    }
};

/// Draws fan counts; precomputes the power-law CDF once.
class FanSampler {
public:
    explicit FanSampler(const FanDistribution& dist) : dist_(dist)
    {
        dist.validate();
        if (dist_.kind == FanDistKind::PowerLaw) {
            cdf_.resize(dist_.power_cap);
            double total = 0.0;
            for (long k = 1; k <= dist_.power_cap; ++k) {
                total += std::pow(static_cast<double>(k), -dist_.power_exponent);
                cdf_[k - 1] = total;
            }
            for (double& c : cdf_) c /= total;
        }
    }

    long operator()(Rng& rng) const
    {
        switch (dist_.kind) {
        case FanDistKind::Constant:
            return dist_.constant_value;
        case FanDistKind::Uniform:
            return rng.uniform_int(dist_.uniform_min, dist_.uniform_max);
        case FanDistKind::PowerLaw: {
            const double u = rng.uniform();
            const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
            return 1 + static_cast<long>(it - cdf_.begin());
        }
        }
        throw std::logic_error("unreachable");
    }

private:
    FanDistribution dist_;
    std::vector<double> cdf_;
};

struct PopulationSpec {
    int n_stories = 200;
    double mean_log = -1.67;  ///< of log r
    double sd_log = 0.47;
    FanDistribution fans;
    double horizon = 2880.0;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (n_stories < 1) throw std::domain_error("n_stories must be >= 1");
        if (sd_log < 0.0) throw std::domain_error("sd_log must be nonnegative");
        if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
        fans.validate();
    }
};

namespace detail {

// Stream ids under the master seed: one for parameter sampling, then one
// per story for its event simulation.
constexpr std::uint64_t kPopulationStream = 0xfffffffffffffffeull;

}  // namespace detail

/// Draw (r, S) pairs: r i.i.d. lognormal(mean_log, sd_log) truncated to
/// (0, 1] by rejection, S from the fan distribution. Deterministic in the
/// spec's seed.
inline std::vector<StoryParams> sample_population(const PopulationSpec& spec)
{
    spec.validate();
    Rng rng(derive_seed(spec.seed, detail::kPopulationStream));
    const FanSampler sample_fans(spec.fans);

    std::vector<StoryParams> stories;
    stories.reserve(spec.n_stories);
    for (int i = 0; i < spec.n_stories; ++i) {
        double r = 0.0;
        int attempts = 0;
        do {
            if (++attempts > 10000)
                throw std::runtime_error(
                    "lognormal truncation to (0,1] rejected 10000 draws; "
                    "mean_log/sd_log put essentially all mass above 1");
            r = std::exp(rng.normal(spec.mean_log, spec.sd_log));
        } while (!(r > 0.0) || r > 1.0);
        const long fans = sample_fans(rng);
        stories.push_back({r, static_cast<int>(fans)});
    }
    return stories;
}

/// One stochastic stream per sampled story, with per-story derived seeds.
inline std::vector<VoteEventStream> generate_dataset(const PopulationSpec& spec,
                                                     const ModelParams& params)
{
    params.validate();
    const std::vector<StoryParams> stories = sample_population(spec);
    std::vector<VoteEventStream> streams;
    streams.reserve(stories.size());
    for (std::size_t i = 0; i < stories.size(); ++i)
        streams.push_back(
            simulate(stories[i], params, spec.horizon, derive_seed(spec.seed, i)));
    return streams;
}

}  // namespace votedyn
