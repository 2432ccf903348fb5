#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexsel/error_matrix.hpp"
#include "lexsel/probability.hpp"

namespace lexsel {

/// Knobs for analyze_matrix. `methods` picks which selection schemes to
/// analyze (empty means all of them); `mc_variant` chooses the scheme the
/// Monte-Carlo estimator samples when trials > 0, with "none" meaning plain
/// lexicase rather than an epsilon variant.
struct AnalyzeOptions {
    std::vector<std::string> methods;
    std::string mc_variant = "static"; // none | static | semidynamic | dynamic
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t tournament_size = 2;
};

struct MethodProbabilities {
    std::optional<ProbabilityVector> exact;
    std::optional<ProbabilityVector> enumerated;
    std::optional<ProbabilityVector> closed_form;
};

struct MonteCarloBlock {
    std::string method;
    std::size_t trials = 0;
    ProbabilityVector p;
    std::vector<double> stderrs;
};

/// Everything analyze_matrix computed about one error matrix. Exact and
/// enumerated probabilities degrade gracefully: past the size guards the
/// vector is absent and `notes` says why.
struct MatrixReport {
    std::size_t rows = 0;
    std::size_t cols = 0;
    EpsilonVector epsilon;
    std::vector<std::pair<std::string, MethodProbabilities>> methods;
    std::optional<MonteCarloBlock> monte_carlo;
    std::vector<std::size_t> pareto;
    std::vector<std::size_t> boundary;
    std::vector<std::size_t> eps_pareto;
    std::vector<std::size_t> eps_boundary;
    std::vector<std::string> notes;

    /// Stable, pretty-printed JSON rendering of the whole report.
    std::string to_json() const;
};

/// Known method names: lex, tourn, ep-lex-s, ep-lex-sd, ep-lex-d.
/// Throws std::invalid_argument for anything else in options.methods.
MatrixReport analyze_matrix(const ErrorMatrix& errors, const AnalyzeOptions& options);

} // namespace lexsel
