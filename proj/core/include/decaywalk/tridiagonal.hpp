#pragma once

#include <span>
#include <vector>

namespace decaywalk {

/// Solves the tridiagonal system
///   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i],   i = 0..n-1
/// by forward elimination and back substitution without pivoting (Thomas).
/// lower[0] and upper[n-1] are ignored. Intended for diagonally dominant
/// systems; throws ConditioningError if a pivot falls below 1e-300 in magnitude.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace decaywalk
