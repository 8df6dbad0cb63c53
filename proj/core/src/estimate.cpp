#include "decaywalk/estimate.hpp"

#include <cmath>

namespace decaywalk {

namespace {

EstimateKind combine(EstimateKind a, EstimateKind b)
{
    return (a == EstimateKind::monte_carlo || b == EstimateKind::monte_carlo) ? EstimateKind::monte_carlo
                                                                              : EstimateKind::quadrature;
}

}  // namespace

EstimateWithError operator+(const EstimateWithError& a, const EstimateWithError& b)
{
    return {a.value + b.value, a.error_bound + b.error_bound, combine(a.kind, b.kind)};
}

EstimateWithError operator-(const EstimateWithError& a, const EstimateWithError& b)
{
    return {a.value - b.value, a.error_bound + b.error_bound, combine(a.kind, b.kind)};
}

EstimateWithError operator+(double shift, const EstimateWithError& a)
{
    return {shift + a.value, a.error_bound, a.kind};
}

EstimateWithError operator-(double shift, const EstimateWithError& a)
{
    return {shift - a.value, a.error_bound, a.kind};
}

EstimateWithError quotient(const EstimateWithError& a, const EstimateWithError& b)
{
    if (!(std::abs(b.value) > b.error_bound))
        throw PrecisionError("denominator " + std::to_string(b.value) + " is not resolved by its error bound "
                             + std::to_string(b.error_bound));
    const double value = a.value / b.value;
    // |d(a/b)| <= |da|/|b| + |a| |db| / (|b| (|b| - |db|))
    const double bound = a.error_bound / std::abs(b.value)
                         + std::abs(a.value) * b.error_bound / (std::abs(b.value) * (std::abs(b.value) - b.error_bound));
    return {value, bound, combine(a.kind, b.kind)};
}

}  // namespace decaywalk
