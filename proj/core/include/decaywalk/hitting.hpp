#pragma once

#include "decaywalk/estimate.hpp"
#include "decaywalk/model.hpp"
#include "decaywalk/quadrature.hpp"

namespace decaywalk {

/// P(e_1 reaches N) = int_0^1 p / S(N;p) dp. In (0, 1/2].
EstimateWithError prob_reach(const WalkModel& model, const QuadratureSpec& spec = {});

/// P(e_1 does not reach N), integrated independently as
/// int_0^1 (1 - p + p a(1;p)) dp rather than as 1 - prob_reach.
EstimateWithError prob_not_reach(const WalkModel& model, const QuadratureSpec& spec = {});

/// Law of L_{tau_N}, the number of failed excursions before the first hit of
/// N: geometric on {0, 1, ...} with success probability s = prob_reach.
class LocalTimePmf
{
public:
    explicit LocalTimePmf(double success_prob);
    LocalTimePmf(const WalkModel& model, const QuadratureSpec& spec = {});

    double success_prob() const noexcept { return success_; }
    /// (1 - s)^n s; throws std::domain_error for n < 0.
    double operator()(long long n) const;
    /// (1 - s) / s.
    double mean() const noexcept { return (1.0 - success_) / success_; }

private:
    double success_;
};

double local_time_pmf(long long n, const WalkModel& model, const QuadratureSpec& spec = {});

/// Expected visits to interior state k (1 <= k <= N-1) during one
/// environment-averaged excursion: int_0^1 p G(k;p) dp.
EstimateWithError expected_visits(int k, const WalkModel& model, const QuadratureSpec& spec = {});

/// E[D_1] = E[min(theta_1, tau_N)] = 1 + int_0^1 p sum_{k=1}^{N-1} G(k;p) dp.
EstimateWithError expected_excursion_duration(const WalkModel& model, const QuadratureSpec& spec = {});

struct HittingTimeRoutes
{
    /// E[D_1] / prob_reach.
    EstimateWithError green_route;
    /// (A'(1) + B'(1)) / B(1).
    EstimateWithError pgf_route;
};

/// E[tau_N] by both the occupation-time route and the generating-function route.
HittingTimeRoutes expected_hitting_time_routes(const WalkModel& model, const QuadratureSpec& spec = {});

/// E[tau_N] = E[D_1] / prob_reach. Cross-checked against the derivative of the
/// generating function; throws ConsistencyError if the routes differ by more
/// than 10x their combined error bounds.
EstimateWithError expected_hitting_time(const WalkModel& model, const QuadratureSpec& spec = {});

/// P(M >= k) = int_0^1 p / S(k;p) dp for the unkilled excursion. model's
/// boundary is ignored; only its decay matters.
EstimateWithError max_depth_tail(int k, const WalkModel& model, const QuadratureSpec& spec = {});

struct ExpectedMaxDepth
{
    /// Set when the tail terms have not dropped below trunc_eps by k_cap.
    bool divergent = false;
    /// Sum of the tails plus the truncation remainder in the bound; value is
    /// +inf when divergent.
    EstimateWithError estimate;
    /// Last tail term evaluated. For a divergent sum this is the plateau.
    double last_tail = 0.0;
    int last_k = 0;
    /// Geometric bound on the neglected tail terms (finite case only).
    double truncation_bound = 0.0;
};

/// E[M] = sum_{k>=1} P(M >= k). Stops at the first term below trunc_eps once
/// successive term ratios are below one and nonincreasing, bounding the rest
/// geometrically. Returns a divergence report rather than throwing when k_cap
/// is reached first (r = 1 is the canonical case: the tails level off at 1/4).
ExpectedMaxDepth expected_max_depth(const WalkModel& model, const QuadratureSpec& spec = {}, double trunc_eps = 1e-12,
                                    int k_cap = 200);

}  // namespace decaywalk
