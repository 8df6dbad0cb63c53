#include <doctest.h>

#include <cmath>

#include "decaywalk/hitting.hpp"
#include "decaywalk/pgf.hpp"

using namespace decaywalk;

TEST_SUITE("hitting")
{
    TEST_CASE("prob_reach closed forms")
    {
        CHECK(std::abs(prob_reach(WalkModel{0.3, 1}).value - 0.5) <= 1e-14);
        CHECK(std::abs(prob_reach(WalkModel{1.0, 2}).value - 1.0 / 3.0) <= 1e-14);
        // r = 1, N = 3: integrand p^3 / (p^2 - p + 1); composite Simpson reference
        auto f = [](double p) { return p * p * p / (p * p - p + 1.0); };
        double simpson = 0.0;
        const int m = 20000;
        for (int i = 0; i <= m; ++i) {
            const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            simpson += w * f(static_cast<double>(i) / m);
        }
        simpson /= 3.0 * m;
        CHECK(prob_reach(WalkModel{1.0, 3}).value == doctest::Approx(simpson).epsilon(1e-12));
    }

    TEST_CASE("reach and non-reach are complementary")
    {
        for (double r : {0.5, 0.8, 1.0})
            for (int n : {1, 2, 5, 10}) {
                const WalkModel model{r, n};
                const auto reach = prob_reach(model);
                const auto miss = prob_not_reach(model);
                CHECK(std::abs(reach.value + miss.value - 1.0) <= reach.error_bound + miss.error_bound + 1e-15);
                CHECK(reach.value > 0.0);
                CHECK(reach.value <= 0.5 + 1e-15);
            }
    }

    TEST_CASE("deeper boundaries are harder to reach")
    {
        for (double r : {0.7, 1.0})
            for (int n = 1; n <= 9; ++n)
                CHECK(prob_reach(WalkModel{r, n + 1}).value < prob_reach(WalkModel{r, n}).value);
    }

    TEST_CASE("local-time law")
    {
        CHECK(local_time_pmf(0, WalkModel{0.9, 1}) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(local_time_pmf(1, WalkModel{1.0, 2}) == doctest::Approx(2.0 / 9.0).epsilon(1e-13));

        const LocalTimePmf pmf{WalkModel{1.0, 2}};
        double total = 0.0;
        for (int n = 0; n <= 50; ++n)
            total += pmf(n);
        CHECK(std::abs(total - 1.0) <= 1e-8);

        for (int n_boundary : {2, 5})
            for (double r : {0.8, 1.0}) {
                const LocalTimePmf law{WalkModel{r, n_boundary}};
                double mean = 0.0;
                for (int n = 0; n < 20000; ++n)
                    mean += n * law(n);
                CHECK(std::abs(mean - law.mean()) <= 1e-8 * std::max(1.0, law.mean()));
                CHECK(law.mean() == doctest::Approx((1.0 - law.success_prob()) / law.success_prob()));
            }
        CHECK_THROWS_AS(local_time_pmf(-1, WalkModel{1.0, 2}), std::domain_error);
        CHECK_THROWS_AS(pmf(-3), std::domain_error);
    }

    TEST_CASE("expected excursion duration")
    {
        CHECK(expected_excursion_duration(WalkModel{0.5, 1}).value == 1.0);
        CHECK(expected_excursion_duration(WalkModel{1.0, 2}).value == doctest::Approx(1.5).epsilon(1e-13));
        // sum of expected visits is the same quantity
        const WalkModel model{0.9, 6};
        double visits = 1.0;
        for (int k = 1; k < 6; ++k)
            visits += expected_visits(k, model).value;
        CHECK(expected_excursion_duration(model).value == doctest::Approx(visits).epsilon(1e-11));
        CHECK_THROWS_AS(expected_visits(6, model), std::domain_error);
        CHECK_THROWS_AS(expected_visits(0, model), std::domain_error);
    }

    TEST_CASE("E[D_1] equals A'(1) + B'(1)")
    {
        for (double r : {0.5, 0.8, 1.0})
            for (int n : {1, 2, 3, 5, 10}) {
                const WalkModel model{r, n};
                const auto duration = expected_excursion_duration(model);
                const auto d = derivatives_at_one(model);
                CHECK(std::abs(duration.value - d.failed.value - d.success.value)
                      <= 10.0 * (duration.error_bound + d.failed.error_bound + d.success.error_bound) + 1e-13);
            }
    }

    TEST_CASE("expected hitting time")
    {
        CHECK(expected_hitting_time(WalkModel{0.7, 1}).value == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(expected_hitting_time(WalkModel{1.0, 2}).value == doctest::Approx(4.5).epsilon(1e-12));
        for (double r : {0.5, 0.8, 1.0})
            for (int n : {2, 3, 5, 10}) {
                const WalkModel model{r, n};
                const auto routes = expected_hitting_time_routes(model);
                CHECK(std::abs(routes.green_route.value - routes.pgf_route.value)
                      <= 10.0 * (routes.green_route.error_bound + routes.pgf_route.error_bound));
                // renewal form E[tau_N] = E[D_1] (1 + E[L]) with E[L] = (1 - s) / s
                const LocalTimePmf law{model};
                CHECK(routes.green_route.value
                      == doctest::Approx(expected_excursion_duration(model).value * (1.0 + law.mean())).epsilon(1e-10));
            }
    }

    TEST_CASE("max-depth tail")
    {
        for (double r : {0.5, 0.9, 1.0})
            CHECK(std::abs(max_depth_tail(1, WalkModel{r, 3}).value - 0.5) <= 1e-14);
        CHECK(std::abs(max_depth_tail(2, WalkModel{1.0, 9}).value - 1.0 / 3.0) <= 1e-14);
        // independent of the boundary
        CHECK(max_depth_tail(7, WalkModel{0.8, 2}).value == max_depth_tail(7, WalkModel{0.8, 40}).value);

        for (double r : {0.5, 0.9, 1.0}) {
            double prev = 1.0;
            for (int k = 1; k <= 30; ++k) {
                const double t = max_depth_tail(k, WalkModel{r, 1}).value;
                CHECK(t <= prev);
                prev = t;
            }
        }
        CHECK_THROWS_AS(max_depth_tail(0, WalkModel{0.5, 1}), std::domain_error);
    }

    TEST_CASE("expected maximum depth: finite for r < 1")
    {
        const auto half = expected_max_depth(WalkModel{0.5, 1});
        CHECK_FALSE(half.divergent);
        CHECK(std::isfinite(half.estimate.value));
        CHECK(half.estimate.value > 0.5);
        CHECK(half.last_k < 50);

        const auto cap100 = expected_max_depth(WalkModel{0.9, 1}, {}, 1e-12, 100);
        const auto cap200 = expected_max_depth(WalkModel{0.9, 1}, {}, 1e-12, 200);
        CHECK_FALSE(cap100.divergent);
        CHECK_FALSE(cap200.divergent);
        CHECK(std::abs(cap100.estimate.value - cap200.estimate.value) <= 1e-10);
    }

    TEST_CASE("expected maximum depth: divergence at r = 1")
    {
        const auto report = expected_max_depth(WalkModel{1.0, 1}, {}, 1e-12, 200);
        CHECK(report.divergent);
        CHECK(std::isinf(report.estimate.value));
        CHECK(report.last_k == 200);
        CHECK(std::abs(report.last_tail - 0.25) <= 1e-3);
        CHECK_THROWS_AS(expected_max_depth(WalkModel{1.0, 1}, {}, 0.0, 10), std::domain_error);
        CHECK_THROWS_AS(expected_max_depth(WalkModel{1.0, 1}, {}, 1e-12, 0), std::domain_error);
    }
}
