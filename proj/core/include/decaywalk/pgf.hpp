#pragma once

#include <vector>

#include "decaywalk/estimate.hpp"
#include "decaywalk/model.hpp"
#include "decaywalk/quadrature.hpp"

namespace decaywalk {

/// Which killed-excursion generating function a boundary-value problem encodes.
enum class BvpKind
{
    /// b(k) = E[q^{tau_0} ; tau_0 < tau_N | X_0 = k], b(0) = 1, b(N) = 0.
    return_to_origin,
    /// c(k) = E[q^{tau_N} ; tau_N < tau_0 | X_0 = k], c(0) = 0, c(N) = 1.
    reach_boundary,
};

struct BvpSolution
{
    WalkModel model;
    double p;
    double q;
    BvpKind kind;
    /// values[k] for k = 0..N, boundary values included.
    std::vector<double> values;
};

/// Solves v[k] = q r^k p v[k+1] + q (1 - r^k p) v[k-1], k = 1..N-1, with the
/// boundary values of `kind`. For N = 1 there are no unknowns.
BvpSolution solve_bvp(BvpKind kind, PgfQuery q, EnvParam p, const WalkModel& model);

/// d/dq of the solution of solve_bvp, from the differentiated system
///   (I - qT) v' = T v,   v'(0) = v'(N) = 0,
/// where (T v)[k] = r^k p v[k+1] + (1 - r^k p) v[k-1]. `solution` must come
/// from solve_bvp with the same arguments.
std::vector<double> solve_bvp_derivative(const BvpSolution& solution);

/// Largest |v[k] - q r^k p v[k+1] - q (1 - r^k p) v[k-1]| over interior k.
double bvp_residual(const BvpSolution& solution);

// Conditional (fixed p) excursion generating functions; these are the
// integrands of pgf_failed and pgf_success.

/// E[q^{theta_1} ; e_1 misses N | Z_1 = p] = (1 - p) q + p q b(1;p).
double pgf_failed_given(PgfQuery q, EnvParam p, const WalkModel& model);
/// E[q^{tau_N} ; e_1 reaches N | Z_1 = p] = p q c(1;p).
double pgf_success_given(PgfQuery q, EnvParam p, const WalkModel& model);

/// A(q) = E[q^{theta_1} ; e_1 does not reach N] = q/2 + int_0^1 p q b(1;p) dp.
EstimateWithError pgf_failed(PgfQuery q, const WalkModel& model, const QuadratureSpec& spec = {});

/// B(q) = E[q^{tau_N} ; e_1 reaches N] = int_0^1 p q c(1;p) dp.
EstimateWithError pgf_success(PgfQuery q, const WalkModel& model, const QuadratureSpec& spec = {});

/// E[q^{tau_N}] = B(q) / (1 - A(q)); the excursions before the first hit
/// form a geometric number of independent failures.
/// Throws PrecisionError if 1 - A(q) is not resolved by its error bound.
EstimateWithError pgf_tau_N(PgfQuery q, const WalkModel& model, const QuadratureSpec& spec = {});

struct PgfDerivatives
{
    EstimateWithError failed;   // A'(1)
    EstimateWithError success;  // B'(1)
};

/// A'(1) = 1/2 + int p (b(1) + b'(1)) dp and B'(1) = int p (c(1) + c'(1)) dp,
/// from the exact derivative systems at q = 1. A'(1) + B'(1) = E[D_1].
PgfDerivatives derivatives_at_one(const WalkModel& model, const QuadratureSpec& spec = {});

}  // namespace decaywalk
