#pragma once

#include <functional>

#include "decaywalk/estimate.hpp"

namespace decaywalk {

struct QuadratureSpec
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 40;

    /// Throws std::domain_error unless all three fields are positive.
    void validate() const;
};

/// Integrates f over (0, 1) with an adaptive 7-point Gauss / 15-point Kronrod
/// pair. Panels are bisected worst-first until the summed |K15 - G7| estimate
/// drops below max(abs_tol, rel_tol |I|). No node is ever 0 or 1.
///
/// Panel contributions are summed in ascending order of their left endpoint,
/// so the result depends only on f and spec.
///
/// Throws ConvergenceError (carrying the best estimate) when panels at
/// max_depth still miss the tolerance, and EvaluationError when f returns a
/// non-finite value.
EstimateWithError integrate_unit(const std::function<double(double)>& f, const QuadratureSpec& spec = {});

}  // namespace decaywalk
