#include "decaywalk/simulate.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "decaywalk/rng.hpp"

namespace decaywalk {

namespace {

// Fixed partition of the work into blocks, reduced in block order, so the
// floating-point sums do not depend on the number of workers.
constexpr std::int64_t kBlockSize = 4096;

constexpr std::uint64_t kExcursionStream = 0x45;
constexpr std::uint64_t kHittingStream = 0x48;

template <class Block, class Fill>
std::vector<Block> run_blocks(std::int64_t n, unsigned workers, Fill&& fill)
{
    const std::int64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<Block> blocks(static_cast<std::size_t>(n_blocks));
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= n_blocks)
                return;
            const std::int64_t begin = b * kBlockSize;
            fill(blocks[static_cast<std::size_t>(b)], begin, std::min(n, begin + kBlockSize));
        }
    };

    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, n_blocks));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    return blocks;
}

EstimateWithError mean_estimate(double sum, double sum_sq, std::int64_t n)
{
    if (n <= 0)
        return {std::nan(""), std::nan(""), EstimateKind::monte_carlo};
    const double count = static_cast<double>(n);
    const double mean = sum / count;
    const double var = n > 1 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0)) : 0.0;
    return {mean, 3.0 * std::sqrt(var / count), EstimateKind::monte_carlo};
}

struct ExcursionBlock
{
    std::int64_t completed = 0;
    std::int64_t reached = 0;
    std::int64_t truncated = 0;
    double sum_duration = 0.0;
    double sum_duration_sq = 0.0;
    std::map<int, std::int64_t> depth;
    std::vector<double> visit_sum;
    std::vector<double> visit_sq;
};

struct HittingBlock
{
    std::int64_t completed = 0;
    std::int64_t truncated = 0;
    double sum_tau = 0.0;
    double sum_tau_sq = 0.0;
    std::map<std::int64_t, std::int64_t> local_time;
    std::map<std::int64_t, std::int64_t> tau;
};

struct PgfBlock
{
    double sum_success = 0.0;
    double sum_success_sq = 0.0;
    double sum_failed = 0.0;
    double sum_failed_sq = 0.0;
};

}  // namespace

void SimConfig::validate() const
{
    if (n_excursions < 1)
        throw std::domain_error("number of samples must be >= 1");
    if (horizon < 1)
        throw std::domain_error("horizon must be >= 1");
}

EstimateWithError proportion_estimate(std::int64_t count, std::int64_t n)
{
    if (n <= 0)
        return {std::nan(""), std::nan(""), EstimateKind::monte_carlo};
    const double f = static_cast<double>(count) / static_cast<double>(n);
    return {f, 3.0 * std::sqrt(f * (1.0 - f) / static_cast<double>(n)), EstimateKind::monte_carlo};
}

EstimateWithError SimSummary::max_depth_tail_freq(int k) const
{
    std::int64_t count = 0;
    for (auto it = max_depth_hist.lower_bound(k); it != max_depth_hist.end(); ++it)
        count += it->second;
    return proportion_estimate(count, excursions);
}

EstimateWithError SimSummary::local_time_freq(std::int64_t n) const
{
    std::int64_t total = 0;
    for (const auto& [value, count] : local_time_hist)
        total += count;
    const auto it = local_time_hist.find(n);
    return proportion_estimate(it == local_time_hist.end() ? 0 : it->second, total);
}

EstimateWithError SimSummary::tau_freq(std::int64_t t) const
{
    std::int64_t total = 0;
    for (const auto& [value, count] : tau_hist)
        total += count;
    const auto it = tau_hist.find(t);
    return proportion_estimate(it == tau_hist.end() ? 0 : it->second, total);
}

SimSummary simulate_excursions(const SimConfig& config)
{
    config.validate();
    const int boundary = config.model.boundary();
    const bool track_visits = config.killed;

    auto blocks = run_blocks<ExcursionBlock>(
        config.n_excursions, config.workers, [&](ExcursionBlock& block, std::int64_t begin, std::int64_t end) {
            DecayPowers powers{config.model.decay()};
            std::vector<std::int64_t> visits(track_visits ? boundary : 0, 0);
            if (track_visits) {
                block.visit_sum.assign(boundary, 0.0);
                block.visit_sq.assign(boundary, 0.0);
            }
            for (std::int64_t i = begin; i < end; ++i) {
                Xoshiro256 rng = substream(config.seed, kExcursionStream, static_cast<std::uint64_t>(i));
                auto uniform = [&rng] { return rng.uniform_open(); };
                const detail::ExcursionCore core = detail::walk_excursion(uniform, config, powers, [&](int k) {
                    if (track_visits)
                        ++visits[k];
                });
                ++block.depth[core.max_depth];
                if (core.terminal == Terminal::horizon_truncated) {
                    ++block.truncated;
                    std::fill(visits.begin(), visits.end(), 0);
                    continue;
                }
                ++block.completed;
                if (core.terminal == Terminal::hit_N)
                    ++block.reached;
                const double d = static_cast<double>(core.duration);
                block.sum_duration += d;
                block.sum_duration_sq += d * d;
                for (int k = 1; k < static_cast<int>(visits.size()); ++k) {
                    if (visits[k] == 0)
                        continue;
                    const double v = static_cast<double>(visits[k]);
                    block.visit_sum[k] += v;
                    block.visit_sq[k] += v * v;
                    visits[k] = 0;
                }
            }
        });

    SimSummary summary;
    summary.excursions = config.n_excursions;
    std::int64_t completed = 0;
    std::int64_t reached = 0;
    double sum_d = 0.0;
    double sum_d2 = 0.0;
    std::vector<double> visit_sum(track_visits ? boundary : 0, 0.0);
    std::vector<double> visit_sq(track_visits ? boundary : 0, 0.0);
    for (const ExcursionBlock& block : blocks) {
        completed += block.completed;
        reached += block.reached;
        summary.truncation_count += block.truncated;
        sum_d += block.sum_duration;
        sum_d2 += block.sum_duration_sq;
        for (const auto& [depth, count] : block.depth)
            summary.max_depth_hist[depth] += count;
        for (std::size_t k = 1; k < visit_sum.size(); ++k) {
            visit_sum[k] += block.visit_sum[k];
            visit_sq[k] += block.visit_sq[k];
        }
    }

    if (config.killed)
        summary.reach_freq = proportion_estimate(reached, completed);
    summary.mean_duration = mean_estimate(sum_d, sum_d2, completed);
    for (int k = 1; k < static_cast<int>(visit_sum.size()); ++k)
        summary.mean_visits[k] = mean_estimate(visit_sum[k], visit_sq[k], completed);
    return summary;
}

SimSummary run_hitting_experiment(const SimConfig& config)
{
    config.validate();
    if (!config.killed)
        throw std::domain_error("hitting experiments require the killed process");

    auto blocks = run_blocks<HittingBlock>(
        config.n_excursions, config.workers, [&](HittingBlock& block, std::int64_t begin, std::int64_t end) {
            DecayPowers powers{config.model.decay()};
            auto ignore = [](int) {};
            for (std::int64_t i = begin; i < end; ++i) {
                Xoshiro256 rng = substream(config.seed, kHittingStream, static_cast<std::uint64_t>(i));
                auto uniform = [&rng] { return rng.uniform_open(); };
                std::int64_t failures = 0;
                std::int64_t tau = 0;
                bool truncated = false;
                for (;;) {
                    const detail::ExcursionCore core = detail::walk_excursion(uniform, config, powers, ignore);
                    if (core.terminal == Terminal::horizon_truncated) {
                        truncated = true;
                        break;
                    }
                    tau += core.duration;
                    if (core.terminal == Terminal::hit_N)
                        break;
                    ++failures;
                }
                if (truncated) {
                    ++block.truncated;
                    continue;
                }
                ++block.completed;
                const double t = static_cast<double>(tau);
                block.sum_tau += t;
                block.sum_tau_sq += t * t;
                ++block.local_time[failures];
                ++block.tau[tau];
            }
        });

    SimSummary summary;
    summary.experiments = config.n_excursions;
    std::int64_t completed = 0;
    double sum_tau = 0.0;
    double sum_tau_sq = 0.0;
    for (const HittingBlock& block : blocks) {
        completed += block.completed;
        summary.truncation_count += block.truncated;
        sum_tau += block.sum_tau;
        sum_tau_sq += block.sum_tau_sq;
        for (const auto& [n, count] : block.local_time)
            summary.local_time_hist[n] += count;
        for (const auto& [t, count] : block.tau)
            summary.tau_hist[t] += count;
    }
    summary.mean_tau_N = mean_estimate(sum_tau, sum_tau_sq, completed);
    return summary;
}

PgfPointEstimate estimate_pgf_point(double q, const SimConfig& config)
{
    config.validate();
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("Monte Carlo generating-function point requires 0 < q < 1");
    if (!config.killed)
        throw std::domain_error("generating-function estimates require the killed process");

    auto blocks = run_blocks<PgfBlock>(
        config.n_excursions, config.workers, [&](PgfBlock& block, std::int64_t begin, std::int64_t end) {
            DecayPowers powers{config.model.decay()};
            auto ignore = [](int) {};
            for (std::int64_t i = begin; i < end; ++i) {
                Xoshiro256 rng = substream(config.seed, kExcursionStream, static_cast<std::uint64_t>(i));
                auto uniform = [&rng] { return rng.uniform_open(); };
                const detail::ExcursionCore core = detail::walk_excursion(uniform, config, powers, ignore);
                const double weight = std::pow(q, static_cast<double>(core.duration));
                if (core.terminal == Terminal::hit_N) {
                    block.sum_success += weight;
                    block.sum_success_sq += weight * weight;
                } else if (core.terminal == Terminal::returned_to_0) {
                    block.sum_failed += weight;
                    block.sum_failed_sq += weight * weight;
                }
            }
        });

    PgfBlock total;
    for (const PgfBlock& block : blocks) {
        total.sum_success += block.sum_success;
        total.sum_success_sq += block.sum_success_sq;
        total.sum_failed += block.sum_failed;
        total.sum_failed_sq += block.sum_failed_sq;
    }
    const std::int64_t n = config.n_excursions;
    const EstimateWithError success = mean_estimate(total.sum_success, total.sum_success_sq, n);
    const EstimateWithError failed = mean_estimate(total.sum_failed, total.sum_failed_sq, n);

    // Delta method for x / (1 - y); x and y are never both nonzero on one excursion.
    const double count = static_cast<double>(n);
    const double x = success.value;
    const double y = failed.value;
    const double var_x = std::pow(success.error_bound / 3.0, 2) * count;
    const double var_y = std::pow(failed.error_bound / 3.0, 2) * count;
    const double cov_xy = -x * y;
    const double denom = 1.0 - y;
    const double var_g = var_x / (denom * denom) + x * x * var_y / std::pow(denom, 4) + 2.0 * x * cov_xy / std::pow(denom, 3);
    const EstimateWithError composed{x / denom, 3.0 * std::sqrt(std::max(0.0, var_g) / count), EstimateKind::monte_carlo};
    return PgfPointEstimate{failed, success, composed};
}

}  // namespace decaywalk
