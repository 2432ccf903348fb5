#pragma once

#include <span>
#include <vector>

#include "lexsel/error_matrix.hpp"

namespace lexsel {

/// a dominates b: a is no worse on every case and strictly better on at
/// least one. Throws std::invalid_argument on length mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

/// a epsilon-dominates b: a_j + eps_j <= b_j on every case, with strict <
/// on at least one. eps entries must be nonnegative.
bool eps_dominates(std::span<const double> a,
                   std::span<const double> b,
                   std::span<const double> eps);

/// Row indices not dominated by any other row, ascending.
std::vector<std::size_t> pareto_set(const ErrorMatrix& errors);

/// Pareto-set members that attain at least one column minimum exactly.
std::vector<std::size_t> boundary_set(const ErrorMatrix& errors);

/// Row indices not epsilon-dominated by any other row, ascending.
std::vector<std::size_t> eps_pareto_set(const ErrorMatrix& errors,
                                        const EpsilonVector& eps);

/// eps_pareto_set members within eps_j of at least one column minimum.
std::vector<std::size_t> eps_boundary_set(const ErrorMatrix& errors,
                                          const EpsilonVector& eps);

} // namespace lexsel
