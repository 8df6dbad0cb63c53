#include "decaywalk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace decaywalk {

namespace {

// Abscissae and weights of the 15-point Kronrod rule and its embedded 7-point
// Gauss rule on [-1, 1] (QUADPACK qk15). Odd indices of kXgk are Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

constexpr std::size_t kMaxPanels = 1u << 16;

struct Panel
{
    double a;
    double b;
    int depth;
    double integral;
    double error;
    bool roundoff_limited;
};

struct ByError
{
    bool operator()(const Panel& x, const Panel& y) const
    {
        if (x.error != y.error)
            return x.error < y.error;
        return x.a > y.a;
    }
};

double interior_node(double x)
{
    if (x <= 0.0)
        return std::numeric_limits<double>::denorm_min();
    if (x >= 1.0)
        return std::nextafter(1.0, 0.0);
    return x;
}

double evaluate(const std::function<double(double)>& f, double x)
{
    const double y = f(x);
    if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "integrand is not finite at p = " << x << " (value " << y << ")";
        throw EvaluationError(msg.str(), x);
    }
    return y;
}

Panel kronrod15(const std::function<double(double)>& f, double a, double b, int depth)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = evaluate(f, interior_node(center));
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(kronrod);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = evaluate(f, interior_node(center - dx));
        const double f2 = evaluate(f, interior_node(center + dx));
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1)
            gauss += kWg[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    abs_sum *= std::abs(half);

    const double diff = std::abs(kronrod - gauss);
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    return Panel{a, b, depth, kronrod, std::max(diff, floor), diff <= floor};
}

}  // namespace

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_depth < 1)
        throw std::domain_error("quadrature spec requires rel_tol > 0, abs_tol > 0, max_depth >= 1");
}

EstimateWithError integrate_unit(const std::function<double(double)>& f, const QuadratureSpec& spec)
{
    spec.validate();

    std::priority_queue<Panel, std::vector<Panel>, ByError> open;
    std::vector<Panel> settled;
    open.push(kronrod15(f, 0.0, 1.0, 0));

    auto totals = [&] {
        double value = 0.0;
        double error = 0.0;
        std::vector<Panel> all = settled;
        auto copy = open;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
        for (const Panel& panel : all) {
            value += panel.integral;
            error += panel.error;
        }
        return EstimateWithError{value, error, EstimateKind::quadrature};
    };

    // Running sums steer the loop; the reported result is re-summed in panel order.
    double value = open.top().integral;
    double error = open.top().error;
    while (!open.empty()) {
        if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value)))
            return totals();

        Panel worst = open.top();
        open.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const bool splittable = worst.depth < spec.max_depth && !worst.roundoff_limited && mid > worst.a && mid < worst.b;
        if (!splittable) {
            settled.push_back(worst);
            continue;
        }
        if (open.size() + settled.size() + 2 > kMaxPanels)
            throw ConvergenceError("quadrature exhausted its panel budget", totals());

        Panel left = kronrod15(f, worst.a, mid, worst.depth + 1);
        Panel right = kronrod15(f, mid, worst.b, worst.depth + 1);
        value += left.integral + right.integral - worst.integral;
        error += left.error + right.error - worst.error;
        open.push(left);
        open.push(right);
    }

    const EstimateWithError best = totals();
    if (best.error_bound <= std::max(spec.abs_tol, spec.rel_tol * std::abs(best.value)))
        return best;
    std::ostringstream msg;
    msg.precision(6);
    msg << "quadrature did not reach tolerance within max_depth " << spec.max_depth << " (estimate " << best.value
        << " +/- " << best.error_bound << ")";
    throw ConvergenceError(msg.str(), best);
}

}  // namespace decaywalk
