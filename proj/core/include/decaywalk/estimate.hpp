#pragma once

#include <stdexcept>
#include <string>

namespace decaywalk {

enum class EstimateKind
{
    quadrature,
    monte_carlo,
};

/// A numeric result with an error bound in the same units as the value.
/// For quadrature the bound is the nested-rule estimate; for Monte Carlo it
/// is a 3-sigma normal half-width.
struct EstimateWithError
{
    double value = 0.0;
    double error_bound = 0.0;
    EstimateKind kind = EstimateKind::quadrature;
};

// First-order error propagation for the combinations used by the analytic modules.
EstimateWithError operator+(const EstimateWithError& a, const EstimateWithError& b);
EstimateWithError operator-(const EstimateWithError& a, const EstimateWithError& b);
EstimateWithError operator+(double shift, const EstimateWithError& a);
EstimateWithError operator-(double shift, const EstimateWithError& a);

/// a / b. Throws PrecisionError when |b| does not exceed its own error bound.
EstimateWithError quotient(const EstimateWithError& a, const EstimateWithError& b);

/// Adaptive integration gave up before meeting its tolerance.
class ConvergenceError : public std::runtime_error
{
public:
    ConvergenceError(const std::string& what, EstimateWithError best)
        : std::runtime_error{what}, best_{best}
    {
    }
    const EstimateWithError& best_estimate() const noexcept { return best_; }

private:
    EstimateWithError best_;
};

/// Integrand returned a non-finite value.
class EvaluationError : public std::runtime_error
{
public:
    EvaluationError(const std::string& what, double node) : std::runtime_error{what}, node_{node} {}
    double node() const noexcept { return node_; }

private:
    double node_;
};

/// A result cannot be resolved at the available accuracy (e.g. a denominator
/// smaller than its error bound).
class PrecisionError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Two independent routes to the same quantity disagree.
class ConsistencyError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A tridiagonal pivot collapsed.
class ConditioningError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

}  // namespace decaywalk
