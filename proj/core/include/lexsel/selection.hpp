#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "lexsel/error_matrix.hpp"
#include "lexsel/rng.hpp"

namespace lexsel {

enum class SelectionMethod {
    random_uniform,
    tournament,
    lexicase,
    eps_static,
    eps_semidynamic,
    eps_dynamic,
};

/// Outcome of one parent-selection event.
struct SelectionEvent {
    std::size_t selected = 0;
    /// Cases actually considered, in the order they were drawn.
    std::vector<std::size_t> case_order;
    /// Candidates still tied when filtering stopped (>= 1).
    std::size_t final_pool_size = 1;

    std::size_t case_depth() const { return case_order.size(); }
};

struct SelectionConfig {
    SelectionMethod method = SelectionMethod::lexicase;
    std::size_t tournament_size = 2;
    /// Number of selection events; 0 means one per population member.
    std::size_t events = 0;
};

/// Binary pass/fail view of an error matrix: entry 0 means the individual is
/// within eps[t] of the population-best error on case t, 1 means it is not.
class PassMatrix {
public:
    PassMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> flags);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint8_t operator()(std::size_t i, std::size_t t) const {
        return flags_[i * cols_ + t];
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint8_t> flags_;
};

/// Thresholds each column against its population minimum plus eps[t].
/// Throws std::invalid_argument when eps length does not match.
PassMatrix build_pass_matrix(const ErrorMatrix& errors, const EpsilonVector& eps);

/// Plain lexicase: shuffle the cases, keep exact pool-elites per case, stop
/// at a single survivor or case exhaustion, break remaining ties uniformly.
SelectionEvent lexicase_select_one(const ErrorMatrix& errors, Rng& rng);

/// Static variant: the lexicase loop over precomputed pass/fail flags.
SelectionEvent eps_lexicase_static_select_one(const PassMatrix& pass, Rng& rng);

/// Semi-dynamic variant: pool-elite error threshold, fixed per-case eps.
SelectionEvent eps_lexicase_semidynamic_select_one(const ErrorMatrix& errors,
                                                   const EpsilonVector& eps,
                                                   Rng& rng);

/// Dynamic variant: pool-elite threshold with eps recomputed as the MAD of
/// the case column restricted to the current pool.
SelectionEvent eps_lexicase_dynamic_select_one(const ErrorMatrix& errors, Rng& rng);

/// Size-r tournament, sampled with replacement; ties among drawn
/// competitors break uniformly. Throws when r == 0 or fitness is empty.
SelectionEvent tournament_select_one(const FitnessVector& fitness,
                                     std::size_t r,
                                     Rng& rng);

SelectionEvent random_select_one(std::size_t population, Rng& rng);

/// Runs cfg.events selection events (defaulting to one per row). Event k
/// draws from Rng::stream(seed, k), so the batch is reproducible and
/// order-independent. Static and semi-dynamic thresholds are computed once
/// from the full matrix; tournament fitness is the row mean of the stored
/// errors.
std::vector<SelectionEvent> select_parents(const ErrorMatrix& errors,
                                           const SelectionConfig& cfg,
                                           std::uint64_t seed);

} // namespace lexsel
