#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "decaywalk/estimate.hpp"
#include "decaywalk/model.hpp"

namespace decaywalk {

struct SimConfig
{
    WalkModel model{1.0, 2};
    std::int64_t n_excursions = 1;
    std::uint64_t seed = 0;
    /// Per-excursion step cap.
    std::int64_t horizon = 1'000'000;
    /// Kill at the boundary N; false runs the excursion until it returns to 0.
    bool killed = true;
    /// Worker threads; 0 picks std::thread::hardware_concurrency(). Results do
    /// not depend on this.
    unsigned workers = 1;

    /// Throws std::domain_error on n_excursions < 1 or horizon < 1.
    void validate() const;
};

enum class Terminal
{
    returned_to_0,
    hit_N,
    horizon_truncated,
};

struct ExcursionOutcome
{
    std::int64_t duration = 0;
    Terminal terminal = Terminal::returned_to_0;
    int max_depth = 0;
    /// Time steps spent at each state k >= 1 (k < N in killed mode).
    std::map<int, std::int64_t> visits;
    /// Time steps spent at 0; always 1 (the excursion starts there).
    std::int64_t time_at_origin = 1;
    double env_p = 0.0;
};

/// r^k p lookups, extended on demand for unkilled walks.
class DecayPowers
{
public:
    explicit DecayPowers(double decay) : decay_{decay}, powers_{1.0} {}

    double operator()(int k)
    {
        while (static_cast<int>(powers_.size()) <= k)
            powers_.push_back(powers_.back() * decay_);
        return powers_[k];
    }

private:
    double decay_;
    std::vector<double> powers_;
};

namespace detail {

struct ExcursionCore
{
    std::int64_t duration = 0;
    Terminal terminal = Terminal::returned_to_0;
    int max_depth = 0;
    double env_p = 0.0;
};

/// One excursion. `uniform()` must return doubles in (0, 1); the first draw is
/// the environment p, each later draw decides one step. `on_visit(k)` is called
/// once per time step spent at an interior state k >= 1.
template <class Uniform, class OnVisit>
ExcursionCore walk_excursion(Uniform& uniform, const SimConfig& config, DecayPowers& powers, OnVisit&& on_visit)
{
    const int boundary = config.model.boundary();
    ExcursionCore out;
    out.env_p = uniform();
    const double p = out.env_p;

    out.duration = 1;
    if (!(uniform() < p))
        return out;  // stayed at 0

    int state = 1;
    out.max_depth = 1;
    if (config.killed && boundary == 1) {
        out.terminal = Terminal::hit_N;
        return out;
    }
    for (;;) {
        if (out.duration >= config.horizon) {
            out.terminal = Terminal::horizon_truncated;
            return out;
        }
        on_visit(state);
        const double up = powers(state) * p;
        state += uniform() < up ? 1 : -1;
        ++out.duration;
        out.max_depth = std::max(out.max_depth, state);
        if (state == 0) {
            out.terminal = Terminal::returned_to_0;
            return out;
        }
        if (config.killed && state == boundary) {
            out.terminal = Terminal::hit_N;
            return out;
        }
    }
}

}  // namespace detail

/// Simulates one excursion of the walk, drawing p and every step decision from
/// `uniform` (a callable returning doubles in (0, 1)).
template <class Uniform>
ExcursionOutcome run_excursion(Uniform&& uniform, const SimConfig& config)
{
    DecayPowers powers{config.model.decay()};
    ExcursionOutcome outcome;
    const detail::ExcursionCore core =
        detail::walk_excursion(uniform, config, powers, [&](int k) { ++outcome.visits[k]; });
    outcome.duration = core.duration;
    outcome.terminal = core.terminal;
    outcome.max_depth = core.max_depth;
    outcome.env_p = core.env_p;
    return outcome;
}

/// Aggregated Monte Carlo results. Every error_bound is a 3-sigma normal half-width.
struct SimSummary
{
    /// Excursions simulated by simulate_excursions.
    std::int64_t excursions = 0;
    /// Hitting experiments run by run_hitting_experiment.
    std::int64_t experiments = 0;

    std::optional<EstimateWithError> reach_freq;
    std::optional<EstimateWithError> mean_duration;
    std::optional<EstimateWithError> mean_tau_N;

    /// L_{tau_N} -> count over completed experiments.
    std::map<std::int64_t, std::int64_t> local_time_hist;
    /// tau_N -> count over completed experiments.
    std::map<std::int64_t, std::int64_t> tau_hist;
    /// max depth -> count over all excursions (truncated ones contribute a lower bound).
    std::map<int, std::int64_t> max_depth_hist;
    /// Mean time steps at interior state k per excursion (killed mode).
    std::map<int, EstimateWithError> mean_visits;

    std::int64_t truncation_count = 0;

    /// Fraction of excursions with max depth >= k, with its half-width.
    EstimateWithError max_depth_tail_freq(int k) const;
    /// Fraction of completed experiments with L_{tau_N} = n, with its half-width.
    EstimateWithError local_time_freq(std::int64_t n) const;
    /// Fraction of completed experiments with tau_N = t, with its half-width.
    EstimateWithError tau_freq(std::int64_t t) const;
};

/// Runs config.n_excursions independent excursions (excursion i uses the
/// substream keyed by (seed, i)). Fills reach_freq (killed mode), mean_duration,
/// max_depth_hist, mean_visits (killed mode) and truncation_count. Means are over
/// excursions that ended; truncated ones are counted, not averaged.
SimSummary simulate_excursions(const SimConfig& config);

/// Runs config.n_excursions hitting experiments: excursions are repeated until
/// one reaches N, recording L_{tau_N} and tau_N. An experiment with a
/// truncated excursion is excluded from the statistics and counted.
/// Requires killed = true.
SimSummary run_hitting_experiment(const SimConfig& config);

struct PgfPointEstimate
{
    /// Mean of q^D over excursions returning to 0 (zero otherwise).
    EstimateWithError failed;
    /// Mean of q^D over excursions reaching N (zero otherwise).
    EstimateWithError success;
    /// success / (1 - failed), half-width by the delta method.
    EstimateWithError composed;
};

/// Monte Carlo estimates of the two excursion generating functions at q and of
/// E[q^{tau_N}] composed from them. Uses the same excursions as
/// simulate_excursions for the same config. Requires 0 < q < 1 and killed = true.
PgfPointEstimate estimate_pgf_point(double q, const SimConfig& config);

/// Proportion count/n with a 3-sigma half-width.
EstimateWithError proportion_estimate(std::int64_t count, std::int64_t n);

}  // namespace decaywalk
