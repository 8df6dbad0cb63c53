#pragma once

#include <stdexcept>
#include <string>

namespace decaywalk {

/// The fixed pair (r, N) describing a walk: spatial decay of the right-step
/// probability and the absorbing upper boundary.
class WalkModel
{
public:
    WalkModel(double decay, int boundary) : decay_{decay}, boundary_{boundary}
    {
        if (!(decay > 0.0 && decay <= 1.0))
            throw std::domain_error("decay r must lie in (0, 1], got " + std::to_string(decay));
        if (boundary < 1)
            throw std::domain_error("boundary N must be >= 1, got " + std::to_string(boundary));
    }

    double decay() const noexcept { return decay_; }
    int boundary() const noexcept { return boundary_; }

    /// Same decay, boundary moved to `boundary`.
    WalkModel with_boundary(int boundary) const { return WalkModel{decay_, boundary}; }

    friend bool operator==(const WalkModel&, const WalkModel&) = default;

private:
    double decay_;
    int boundary_;
};

/// One environment draw p, held fixed for the duration of an excursion.
/// Open interval only: every p-dependent quantity is evaluated strictly inside (0, 1).
class EnvParam
{
public:
    explicit EnvParam(double p) : p_{p}
    {
        if (!(p > 0.0 && p < 1.0))
            throw std::domain_error("environment parameter p must lie in (0, 1), got " + std::to_string(p));
    }

    double value() const noexcept { return p_; }

private:
    double p_;
};

/// Damping variable q of a generating function. q = 1 is admitted for limits.
class PgfQuery
{
public:
    explicit PgfQuery(double q) : q_{q}
    {
        if (!(q > 0.0 && q <= 1.0))
            throw std::domain_error("generating-function argument q must lie in (0, 1], got " + std::to_string(q));
    }

    double value() const noexcept { return q_; }

private:
    double q_;
};

}  // namespace decaywalk
