#include "decaywalk/pgf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "decaywalk/tridiagonal.hpp"

namespace decaywalk {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs)
{
    const std::size_t n = diag.size();
    std::vector<double> x(n);
    if (n == 0)
        return x;
    std::vector<double> c_prime(n);

    auto check = [](double pivot, std::size_t row) {
        if (!(std::abs(pivot) >= 1e-300)) {
            std::ostringstream msg;
            msg << "tridiagonal pivot " << pivot << " at row " << row << " is below 1e-300";
            throw ConditioningError(msg.str());
        }
    };

    check(diag[0], 0);
    c_prime[0] = upper[0] / diag[0];
    x[0] = rhs[0] / diag[0];
    // Forward sweep
    for (std::size_t i = 1; i < n; ++i) {
        const double pivot = diag[i] - lower[i] * c_prime[i - 1];
        check(pivot, i);
        c_prime[i] = i + 1 < n ? upper[i] / pivot : 0.0;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }
    // Back substitution
    for (std::size_t i = n - 1; i > 0; --i)
        x[i - 1] -= c_prime[i - 1] * x[i];
    return x;
}

namespace {

double right_prob(const WalkModel& model, double p, int k)
{
    return p * std::pow(model.decay(), k);
}

}  // namespace

BvpSolution solve_bvp(BvpKind kind, PgfQuery query, EnvParam param, const WalkModel& model)
{
    const int n = model.boundary();
    const double q = query.value();
    const double p = param.value();

    BvpSolution solution{model, p, q, kind, std::vector<double>(n + 1, 0.0)};
    const double left = kind == BvpKind::return_to_origin ? 1.0 : 0.0;
    const double right = kind == BvpKind::return_to_origin ? 0.0 : 1.0;
    solution.values.front() = left;
    solution.values.back() = right;
    if (n == 1)
        return solution;

    // Unknowns v[1..N-1] stored at index k-1.
    const std::size_t m = static_cast<std::size_t>(n - 1);
    std::vector<double> lower(m), diag(m, 1.0), upper(m), rhs(m, 0.0);
    for (int k = 1; k < n; ++k) {
        const double up = right_prob(model, p, k);
        lower[k - 1] = -q * (1.0 - up);
        upper[k - 1] = -q * up;
    }
    rhs.front() += q * (1.0 - right_prob(model, p, 1)) * left;
    rhs.back() += q * right_prob(model, p, n - 1) * right;

    const std::vector<double> interior = solve_tridiagonal(lower, diag, upper, rhs);
    std::copy(interior.begin(), interior.end(), solution.values.begin() + 1);
    return solution;
}

std::vector<double> solve_bvp_derivative(const BvpSolution& solution)
{
    const WalkModel& model = solution.model;
    const int n = model.boundary();
    const double q = solution.q;
    const double p = solution.p;
    const std::vector<double>& v = solution.values;

    std::vector<double> derivative(n + 1, 0.0);
    if (n == 1)
        return derivative;

    const std::size_t m = static_cast<std::size_t>(n - 1);
    std::vector<double> lower(m), diag(m, 1.0), upper(m), rhs(m);
    for (int k = 1; k < n; ++k) {
        const double up = right_prob(model, p, k);
        lower[k - 1] = -q * (1.0 - up);
        upper[k - 1] = -q * up;
        rhs[k - 1] = up * v[k + 1] + (1.0 - up) * v[k - 1];
    }
    const std::vector<double> interior = solve_tridiagonal(lower, diag, upper, rhs);
    std::copy(interior.begin(), interior.end(), derivative.begin() + 1);
    return derivative;
}

double bvp_residual(const BvpSolution& solution)
{
    const int n = solution.model.boundary();
    const std::vector<double>& v = solution.values;
    double worst = 0.0;
    for (int k = 1; k < n; ++k) {
        const double up = right_prob(solution.model, solution.p, k);
        const double r = v[k] - solution.q * up * v[k + 1] - solution.q * (1.0 - up) * v[k - 1];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double pgf_failed_given(PgfQuery q, EnvParam p, const WalkModel& model)
{
    const BvpSolution b = solve_bvp(BvpKind::return_to_origin, q, p, model);
    return (1.0 - p.value()) * q.value() + p.value() * q.value() * b.values[1];
}

double pgf_success_given(PgfQuery q, EnvParam p, const WalkModel& model)
{
    const BvpSolution c = solve_bvp(BvpKind::reach_boundary, q, p, model);
    return p.value() * q.value() * c.values[1];
}

EstimateWithError pgf_failed(PgfQuery q, const WalkModel& model, const QuadratureSpec& spec)
{
    const EstimateWithError tail = integrate_unit(
        [&](double p) {
            return p * q.value() * solve_bvp(BvpKind::return_to_origin, q, EnvParam{p}, model).values[1];
        },
        spec);
    return 0.5 * q.value() + tail;
}

EstimateWithError pgf_success(PgfQuery q, const WalkModel& model, const QuadratureSpec& spec)
{
    return integrate_unit(
        [&](double p) {
            return p * q.value() * solve_bvp(BvpKind::reach_boundary, q, EnvParam{p}, model).values[1];
        },
        spec);
}

EstimateWithError pgf_tau_N(PgfQuery q, const WalkModel& model, const QuadratureSpec& spec)
{
    const EstimateWithError failed = pgf_failed(q, model, spec);
    const EstimateWithError success = pgf_success(q, model, spec);
    return quotient(success, 1.0 - failed);
}

PgfDerivatives derivatives_at_one(const WalkModel& model, const QuadratureSpec& spec)
{
    const PgfQuery one{1.0};
    auto integrand = [&](BvpKind kind) {
        return [&model, kind, one](double p) {
            const BvpSolution v = solve_bvp(kind, one, EnvParam{p}, model);
            const std::vector<double> dv = solve_bvp_derivative(v);
            return p * (v.values[1] + dv[1]);
        };
    };
    return PgfDerivatives{
        0.5 + integrate_unit(integrand(BvpKind::return_to_origin), spec),
        integrate_unit(integrand(BvpKind::reach_boundary), spec),
    };
}

}  // namespace decaywalk
