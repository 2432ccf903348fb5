#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lexsel/error_matrix.hpp"
#include "lexsel/selection.hpp"

namespace lexsel {

/// Per-individual selection probabilities; entries are nonnegative and sum
/// to one up to rounding.
using ProbabilityVector = std::vector<double>;

bool is_probability_vector(const ProbabilityVector& p, double tol = 1e-9);

/// Raised when an exact analysis would exceed its configured size guard.
/// The message points the caller at the sampling estimator instead.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Size guards for the exact analyses. The recursion memoizes on
/// (candidate-set bitmask, remaining-case bitmask), so individuals are
/// hard-capped at 64 and cases at 32 regardless of the requested limits.
struct ExactLimits {
    std::size_t max_individuals = 64;
    std::size_t max_cases = 20;
};

/// Which elite test the exact recursion applies per case.
enum class Elitism {
    exact,       // pool minimum of the raw errors
    pass_matrix, // pool minimum of pass/fail flags thresholded up front
};

/// Exact selection probabilities for plain lexicase, by recursing over
/// "pick an unseen case, keep the pool elites" with memoization on the
/// (pool, remaining cases) state. Exponential in the worst case; guarded by
/// `limits` (throws CapacityError).
ProbabilityVector p_lex_exact(const ErrorMatrix& errors, ExactLimits limits = {});

/// Same recursion over precomputed pass/fail flags: exact probabilities for
/// the static variant.
ProbabilityVector p_lex_exact(const PassMatrix& pass, ExactLimits limits = {});

/// Dispatcher: pass_matrix mode thresholds with the population MAD vector.
ProbabilityVector p_lex_exact(const ErrorMatrix& errors,
                              Elitism elitism,
                              ExactLimits limits = {});

/// Ground-truth probabilities for any variant by enumerating every case
/// order and splitting each order's weight uniformly over its survivors.
/// Factorial in the case count; guarded (throws CapacityError above
/// max_cases, default 8). `eps` applies to the static and semi-dynamic
/// variants and defaults to the population MAD vector; the dynamic variant
/// derives thresholds from each pool and ignores it.
ProbabilityVector p_lex_enumerate(const ErrorMatrix& errors,
                                  SelectionMethod variant,
                                  const std::optional<EpsilonVector>& eps = {},
                                  std::size_t max_cases = 8);

struct McEstimate {
    ProbabilityVector p;
    /// Per-entry standard error sqrt(p(1-p)/trials).
    std::vector<double> stderrs;
};

/// Samples `trials` independent selection events (trial k draws from
/// Rng::stream(seed, k)) and returns empirical frequencies.
McEstimate p_lex_monte_carlo(const ErrorMatrix& errors,
                             SelectionMethod variant,
                             const std::optional<EpsilonVector>& eps,
                             std::size_t trials,
                             std::uint64_t seed);

/// Closed-form tournament selection probabilities for sampling with
/// replacement, from the rank-class decomposition of the fitness values
/// (exact ties share a class).
ProbabilityVector p_tournament(const FitnessVector& fitness, std::size_t r);

/// Probability that a given case appears first in at least one of n_events
/// uniformly shuffled orders over t_cases cases.
double p_first(std::size_t t_cases, std::size_t n_events);

/// cases_of[n] lists the cases on which individual n is elite: exactly at
/// the column minimum, or within eps[t] of it when eps is given.
struct EliteCaseSets {
    std::vector<std::vector<std::size_t>> cases_of;
};

EliteCaseSets elite_case_sets(const ErrorMatrix& errors,
                              const std::optional<EpsilonVector>& eps = {});

} // namespace lexsel
