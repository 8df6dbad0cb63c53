#pragma once

#include <cstdint>
#include <vector>

#include "decaywalk/model.hpp"

namespace decaywalk {

/// Nonnegative real kept as mantissa * 2^exponent with mantissa in [0.5, 1).
/// The scale function grows like r^{-k^2/2}, far past the range of double;
/// this keeps products and sums exact to a few ulps at any magnitude.
class ScaledReal
{
public:
    ScaledReal() = default;

    static ScaledReal from_double(double x);
    static ScaledReal from_log(double log_value);

    double mantissa() const noexcept { return mantissa_; }
    std::int64_t exponent() const noexcept { return exponent_; }
    bool is_zero() const noexcept { return mantissa_ == 0.0; }

    /// Natural log; -inf for zero.
    double log() const noexcept;
    /// Saturates to 0 or +inf outside the double range.
    double to_double() const noexcept;

    friend ScaledReal operator*(ScaledReal a, ScaledReal b) noexcept;
    friend ScaledReal operator/(ScaledReal a, ScaledReal b) noexcept;
    friend ScaledReal operator+(ScaledReal a, ScaledReal b) noexcept;

private:
    ScaledReal(double m, std::int64_t e) noexcept;

    double mantissa_ = 0.0;
    std::int64_t exponent_ = 0;
};

/// Per-(model, p) table of the products
///   T_i = prod_{j=1}^{i} (1 - r^j p) / (r^j p),   i = 0..N-1   (T_0 = 1)
/// together with prefix sums S(k) = sum_{i<k} T_i and suffix sums S(N) - S(k).
/// Every scale-function quantity for this (model, p) is read from here, so a
/// sweep over k or x costs O(1) per entry after the O(N) build.
///
/// Immutable after construction.
class LogRatioTable
{
public:
    LogRatioTable(const WalkModel& model, EnvParam p);

    const WalkModel& model() const noexcept { return model_; }
    double p() const noexcept { return p_; }
    int boundary() const noexcept { return model_.boundary(); }

    /// log T_i for 0 <= i <= N-1.
    double log_term(int i) const;
    const std::vector<double>& log_terms() const noexcept { return log_terms_; }

    /// T_i = S(i+1) - S(i) for 0 <= i <= N-1.
    ScaledReal term(int i) const;

    /// S(k) for 0 <= k <= N; S(0) = 0 (empty sum).
    ScaledReal scale(int k) const;
    /// S(N) - S(k) for 0 <= k <= N, summed directly from the tail so it does not cancel.
    ScaledReal scale_gap(int k) const;

    /// Right-step probability r^k p.
    double right_prob(int k) const noexcept;

    /// W(k) = r^k p T_k for 1 <= k <= N-1.
    ScaledReal weight(int k) const;

    /// Probability of reaching 0 before N from k, 0 <= k <= N.
    double ruin(int k) const;

    /// Expected visits to k (1 <= k <= N-1) before absorption at {0, N},
    /// starting from x (0 <= x <= N).
    double green(int x, int k) const;

private:
    WalkModel model_;
    double p_;
    std::vector<ScaledReal> terms_;
    std::vector<double> log_terms_;
    std::vector<ScaledReal> prefix_;
    std::vector<ScaledReal> suffix_;
};

// Free-function forms; each builds a table for (model, p). Prefer a shared
// LogRatioTable when evaluating many k or x for the same p.

/// S(k;p) for 1 <= k <= N.
double scale_S(int k, EnvParam p, const WalkModel& model);
double log_scale_S(int k, EnvParam p, const WalkModel& model);

/// W(k;p) for 1 <= k <= N-1.
double weight_W(int k, EnvParam p, const WalkModel& model);
double log_weight_W(int k, EnvParam p, const WalkModel& model);

/// a(k;p) = (S(N) - S(k)) / S(N), 0 <= k <= N.
double ruin_prob(int k, EnvParam p, const WalkModel& model);

/// G(x, k; p), 0 <= x <= N, 1 <= k <= N-1.
double green_G(int x, int k, EnvParam p, const WalkModel& model);
/// G(k; p) = G(1, k; p).
double green_G(int k, EnvParam p, const WalkModel& model);

}  // namespace decaywalk
