#include "decaywalk/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace decaywalk {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_range(const char* what, int value, int lo, int hi)
{
    if (value < lo || value > hi)
        throw std::domain_error(std::string(what) + " = " + std::to_string(value) + " outside [" + std::to_string(lo)
                                + ", " + std::to_string(hi) + "]");
}

}  // namespace

ScaledReal::ScaledReal(double m, std::int64_t e) noexcept
{
    if (m == 0.0)
        return;
    int shift = 0;
    mantissa_ = std::frexp(m, &shift);
    exponent_ = e + shift;
}

ScaledReal ScaledReal::from_double(double x)
{
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::domain_error("ScaledReal requires a finite nonnegative value");
    return ScaledReal{x, 0};
}

ScaledReal ScaledReal::from_log(double log_value)
{
    if (log_value == -std::numeric_limits<double>::infinity())
        return {};
    const double e = std::floor(log_value / kLn2);
    return ScaledReal{std::exp(log_value - e * kLn2), static_cast<std::int64_t>(e)};
}

double ScaledReal::log() const noexcept
{
    if (is_zero())
        return -std::numeric_limits<double>::infinity();
    return std::log(mantissa_) + static_cast<double>(exponent_) * kLn2;
}

double ScaledReal::to_double() const noexcept
{
    if (is_zero())
        return 0.0;
    if (exponent_ > std::numeric_limits<double>::max_exponent)
        return std::numeric_limits<double>::infinity();
    if (exponent_ < std::numeric_limits<double>::min_exponent - std::numeric_limits<double>::digits)
        return 0.0;
    return std::ldexp(mantissa_, static_cast<int>(exponent_));
}

ScaledReal operator*(ScaledReal a, ScaledReal b) noexcept
{
    if (a.is_zero() || b.is_zero())
        return {};
    return ScaledReal{a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_};
}

ScaledReal operator/(ScaledReal a, ScaledReal b) noexcept
{
    if (a.is_zero())
        return {};
    if (b.is_zero())
        return ScaledReal{std::numeric_limits<double>::infinity(), 0};
    return ScaledReal{a.mantissa_ / b.mantissa_, a.exponent_ - b.exponent_};
}

ScaledReal operator+(ScaledReal a, ScaledReal b) noexcept
{
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    if (a.exponent_ < b.exponent_)
        std::swap(a, b);
    const std::int64_t gap = a.exponent_ - b.exponent_;
    if (gap > std::numeric_limits<double>::digits + 2)
        return a;
    return ScaledReal{a.mantissa_ + std::ldexp(b.mantissa_, -static_cast<int>(gap)), a.exponent_};
}

LogRatioTable::LogRatioTable(const WalkModel& model, EnvParam p) : model_{model}, p_{p.value()}
{
    const int n = model.boundary();
    const double log_r = std::log(model.decay());
    const double log_p = std::log(p_);

    terms_.reserve(n);
    log_terms_.reserve(n);
    terms_.push_back(ScaledReal::from_double(1.0));
    log_terms_.push_back(0.0);
    for (int i = 1; i < n; ++i) {
        const double log_x = i * log_r + log_p;
        ScaledReal ratio;
        if (log_x > -600.0) {
            const double x = right_prob(i);
            ratio = ScaledReal::from_double((1.0 - x) / x);
        } else {
            // r^i p underflows; (1 - x) / x == 1 / x to working precision
            ratio = ScaledReal::from_log(-log_x);
        }
        terms_.push_back(terms_.back() * ratio);
        log_terms_.push_back(terms_.back().log());
    }

    prefix_.resize(n + 1);
    for (int k = 1; k <= n; ++k)
        prefix_[k] = prefix_[k - 1] + terms_[k - 1];

    suffix_.resize(n + 1);
    for (int k = n - 1; k >= 0; --k)
        suffix_[k] = suffix_[k + 1] + terms_[k];
}

double LogRatioTable::log_term(int i) const
{
    require_range("term index", i, 0, boundary() - 1);
    return log_terms_[i];
}

ScaledReal LogRatioTable::term(int i) const
{
    require_range("term index", i, 0, boundary() - 1);
    return terms_[i];
}

ScaledReal LogRatioTable::scale(int k) const
{
    require_range("k", k, 0, boundary());
    return prefix_[k];
}

ScaledReal LogRatioTable::scale_gap(int k) const
{
    require_range("k", k, 0, boundary());
    return suffix_[k];
}

double LogRatioTable::right_prob(int k) const noexcept
{
    return p_ * std::pow(model_.decay(), k);
}

ScaledReal LogRatioTable::weight(int k) const
{
    require_range("k", k, 1, boundary() - 1);
    const double log_x = k * std::log(model_.decay()) + std::log(p_);
    const ScaledReal step = log_x > -600.0 ? ScaledReal::from_double(right_prob(k)) : ScaledReal::from_log(log_x);
    return step * terms_[k];
}

double LogRatioTable::ruin(int k) const
{
    require_range("k", k, 0, boundary());
    return (suffix_[k] / prefix_[boundary()]).to_double();
}

double LogRatioTable::green(int x, int k) const
{
    require_range("x", x, 0, boundary());
    require_range("k", k, 1, boundary() - 1);
    if (x == 0 || x == boundary())
        return 0.0;
    const int lo = std::min(x, k);
    const int hi = std::max(x, k);
    // G(x,k) = S(min) (S(N) - S(max)) / (W(k) S(N)), both branches of the two-sided form
    return (prefix_[lo] * suffix_[hi] / (weight(k) * prefix_[boundary()])).to_double();
}

double scale_S(int k, EnvParam p, const WalkModel& model)
{
    require_range("k", k, 1, model.boundary());
    return LogRatioTable{model, p}.scale(k).to_double();
}

double log_scale_S(int k, EnvParam p, const WalkModel& model)
{
    require_range("k", k, 1, model.boundary());
    return LogRatioTable{model, p}.scale(k).log();
}

double weight_W(int k, EnvParam p, const WalkModel& model)
{
    require_range("k", k, 1, model.boundary() - 1);
    return LogRatioTable{model, p}.weight(k).to_double();
}

double log_weight_W(int k, EnvParam p, const WalkModel& model)
{
    require_range("k", k, 1, model.boundary() - 1);
    return LogRatioTable{model, p}.weight(k).log();
}

double ruin_prob(int k, EnvParam p, const WalkModel& model)
{
    return LogRatioTable{model, p}.ruin(k);
}

double green_G(int x, int k, EnvParam p, const WalkModel& model)
{
    return LogRatioTable{model, p}.green(x, k);
}

double green_G(int k, EnvParam p, const WalkModel& model)
{
    return green_G(1, k, p, model);
}

}  // namespace decaywalk
