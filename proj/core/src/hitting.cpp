#include "decaywalk/hitting.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "decaywalk/pgf.hpp"
#include "decaywalk/scale.hpp"

namespace decaywalk {

namespace {

/// p / S(k;p) without leaving the scaled representation until the end.
double reach_integrand(double p, const WalkModel& model)
{
    const LogRatioTable table{model, EnvParam{p}};
    return (ScaledReal::from_double(p) / table.scale(model.boundary())).to_double();
}

}  // namespace

EstimateWithError prob_reach(const WalkModel& model, const QuadratureSpec& spec)
{
    return integrate_unit([&](double p) { return reach_integrand(p, model); }, spec);
}

EstimateWithError prob_not_reach(const WalkModel& model, const QuadratureSpec& spec)
{
    return integrate_unit(
        [&](double p) {
            const LogRatioTable table{model, EnvParam{p}};
            return 1.0 - p + p * table.ruin(1);
        },
        spec);
}

LocalTimePmf::LocalTimePmf(double success_prob) : success_{success_prob}
{
    if (!(success_prob > 0.0 && success_prob <= 1.0))
        throw std::domain_error("local-time success probability must lie in (0, 1]");
}

LocalTimePmf::LocalTimePmf(const WalkModel& model, const QuadratureSpec& spec)
    : LocalTimePmf{prob_reach(model, spec).value}
{
}

double LocalTimePmf::operator()(long long n) const
{
    if (n < 0)
        throw std::domain_error("local time n must be >= 0, got " + std::to_string(n));
    return std::pow(1.0 - success_, static_cast<double>(n)) * success_;
}

double local_time_pmf(long long n, const WalkModel& model, const QuadratureSpec& spec)
{
    if (n < 0)
        throw std::domain_error("local time n must be >= 0, got " + std::to_string(n));
    return LocalTimePmf{model, spec}(n);
}

EstimateWithError expected_visits(int k, const WalkModel& model, const QuadratureSpec& spec)
{
    if (k < 1 || k > model.boundary() - 1)
        throw std::domain_error("interior state k = " + std::to_string(k) + " outside [1, N-1]");
    return integrate_unit([&](double p) { return p * LogRatioTable{model, EnvParam{p}}.green(1, k); }, spec);
}

EstimateWithError expected_excursion_duration(const WalkModel& model, const QuadratureSpec& spec)
{
    if (model.boundary() == 1)
        return {1.0, 0.0, EstimateKind::quadrature};
    const EstimateWithError interior = integrate_unit(
        [&](double p) {
            const LogRatioTable table{model, EnvParam{p}};
            double sum = 0.0;
            for (int k = 1; k < model.boundary(); ++k)
                sum += table.green(1, k);
            return p * sum;
        },
        spec);
    return 1.0 + interior;
}

HittingTimeRoutes expected_hitting_time_routes(const WalkModel& model, const QuadratureSpec& spec)
{
    const EstimateWithError duration = expected_excursion_duration(model, spec);
    const EstimateWithError reach = prob_reach(model, spec);

    const PgfDerivatives slopes = derivatives_at_one(model, spec);
    const EstimateWithError success_at_one = pgf_success(PgfQuery{1.0}, model, spec);

    return HittingTimeRoutes{
        quotient(duration, reach),
        quotient(slopes.failed + slopes.success, success_at_one),
    };
}

EstimateWithError expected_hitting_time(const WalkModel& model, const QuadratureSpec& spec)
{
    const HittingTimeRoutes routes = expected_hitting_time_routes(model, spec);
    const double gap = std::abs(routes.green_route.value - routes.pgf_route.value);
    const double allowed = 10.0 * (routes.green_route.error_bound + routes.pgf_route.error_bound);
    if (gap > allowed) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "E[tau_N] routes disagree: occupation-time route " << routes.green_route.value
            << ", generating-function route " << routes.pgf_route.value << " (allowed gap " << allowed << ")";
        throw ConsistencyError(msg.str());
    }
    return routes.green_route;
}

EstimateWithError max_depth_tail(int k, const WalkModel& model, const QuadratureSpec& spec)
{
    if (k < 1)
        throw std::domain_error("depth k must be >= 1, got " + std::to_string(k));
    const WalkModel moved = model.with_boundary(k);
    return integrate_unit([&](double p) { return reach_integrand(p, moved); }, spec);
}

ExpectedMaxDepth expected_max_depth(const WalkModel& model, const QuadratureSpec& spec, double trunc_eps, int k_cap)
{
    if (!(trunc_eps > 0.0))
        throw std::domain_error("trunc_eps must be > 0");
    if (k_cap < 1)
        throw std::domain_error("k_cap must be >= 1");

    ExpectedMaxDepth result;
    EstimateWithError sum{0.0, 0.0, EstimateKind::quadrature};
    double previous = 0.0;
    double previous_ratio = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_cap; ++k) {
        const EstimateWithError tail = max_depth_tail(k, model, spec);
        sum = sum + tail;
        result.last_tail = tail.value;
        result.last_k = k;

        if (k >= 2 && previous > 0.0) {
            const double ratio = tail.value / previous;
            const bool settled = ratio < 1.0 && ratio <= previous_ratio;
            if (tail.value < trunc_eps && settled) {
                result.truncation_bound = tail.value * ratio / (1.0 - ratio);
                sum.error_bound += result.truncation_bound;
                result.estimate = sum;
                return result;
            }
            previous_ratio = ratio;
        }
        if (tail.value == 0.0) {
            result.estimate = sum;
            return result;
        }
        previous = tail.value;
    }

    result.divergent = true;
    result.estimate = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                       EstimateKind::quadrature};
    return result;
}

}  // namespace decaywalk
