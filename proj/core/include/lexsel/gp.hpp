#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lexsel/dataset.hpp"
#include "lexsel/error_matrix.hpp"
#include "lexsel/rng.hpp"
#include "lexsel/selection.hpp"

namespace lexsel::gp {

enum class Op : std::uint8_t {
    add, sub, mul, div,   // binary
    sin, cos, exp, log,   // unary
    var, constant,        // leaves
};

constexpr int arity(Op op) {
    switch (op) {
    case Op::var:
    case Op::constant: return 0;
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::log: return 1;
    default: return 2;
    }
}

struct Node {
    Op op = Op::constant;
    std::uint16_t index = 0; // variable number when op == var
    double value = 0.0;      // constant payload when op == constant

    bool operator==(const Node&) const = default;
};

/// Expression in prefix order. The constructor checks well-formedness
/// (arities consume exactly the node list); length policy is the engine's
/// concern, so standalone trees as small as a single leaf are representable.
class ProgramTree {
public:
    explicit ProgramTree(std::vector<Node> nodes);

    std::size_t size() const { return nodes_.size(); }
    const Node& operator[](std::size_t i) const { return nodes_[i]; }
    const std::vector<Node>& nodes() const { return nodes_; }

    /// One-past-the-end position of the subtree rooted at i.
    std::size_t subtree_end(std::size_t i) const;

    /// Smallest input width this tree can be evaluated against.
    std::size_t min_width() const;

    bool operator==(const ProgramTree&) const = default;

private:
    std::vector<Node> nodes_;
};

/// Engine-wide length policy for generated and varied trees.
inline constexpr std::size_t kMinLength = 3;
inline constexpr std::size_t kMaxLength = 50;

/// Evaluation guards: division by near-zero yields 1, log takes |x| with a
/// penalty at exactly 0, exp saturates at the penalty cap, and any
/// non-finite sample output is replaced by the cap.
inline constexpr double kDivGuard = 1e-12;
inline constexpr double kOutputCap = 1e30;

/// One protected evaluation. Throws std::invalid_argument when the tree
/// reads a variable beyond x.size().
double evaluate_sample(const ProgramTree& tree, std::span<const double> x);

/// Protected evaluation over every sample of the dataset.
std::vector<double> evaluate(const ProgramTree& tree, const Dataset& data);

/// (y - yhat)^2 per sample, with non-finite results replaced by the
/// penalty so downstream error matrices stay finite.
std::vector<double> squared_errors(std::span<const double> yhat,
                                   std::span<const double> y);

/// Random tree over n_features variables and ERC constants in [-1, 1].
/// `full` expands every branch to exactly `depth`; grow may stop early.
ProgramTree random_tree(std::size_t n_features, std::size_t depth, bool full, Rng& rng);

/// Ramped half-and-half over depths 2..6, alternating grow and full,
/// retrying until the length policy holds.
ProgramTree ramped_tree(std::size_t n_features, Rng& rng);

/// Replaces the subtree of a rooted at `at_a` with the subtree of b rooted
/// at `at_b`. Positions out of range throw std::invalid_argument. The
/// result may violate the length policy; vary() enforces it by retrying.
ProgramTree crossover_at(const ProgramTree& a, const ProgramTree& b,
                         std::size_t at_a, std::size_t at_b);

enum class VariationKind { crossover, point_mutation, subtree_mutation };

struct VaryResult {
    ProgramTree child;
    VariationKind kind;
};

/// Exclusive-choice variation: crossover with probability crossover_rate,
/// otherwise mutation. Point mutation rewrites about 10% of nodes
/// arity-for-arity; when that leaves the tree unchanged, a random subtree
/// is regrown instead. Children always satisfy the length policy.
VaryResult vary(const ProgramTree& p1, const ProgramTree& p2,
                double crossover_rate, std::size_t n_features, Rng& rng);

/// Prefix serialization with every constant collapsed to "C", e.g.
/// "+ x1 sin C"; the behaviour-similarity metric below compares these.
std::string canonical_form(const ProgramTree& tree);

/// Levenshtein distance over characters.
std::size_t edit_distance(const std::string& a, const std::string& b);

enum class EngineMethod {
    random_uniform,
    tournament,
    lexicase,
    eps_static,
    eps_semidynamic,
    eps_dynamic,
    age_fitness_pareto,
    deterministic_crowding,
};

struct EngineConfig {
    EngineMethod method = EngineMethod::lexicase;
    std::size_t population_size = 1000;
    std::size_t generations = 1000;
    double crossover_rate = 0.60;
    double mutation_rate = 0.40;
    std::size_t tournament_size = 2;
    /// Guarantees the best-MSE individual survives each generational step.
    /// Survival in the age-fitness and crowding methods is defined by the
    /// method itself, so the flag only affects the generational step.
    bool keep_best = true;
    std::uint64_t seed = 0;
};

struct Individual {
    ProgramTree tree;
    std::vector<double> outputs; // per training sample
    double mse = 0.0;
    std::size_t age = 0;
};

struct GenerationMetrics {
    std::size_t generation = 0;
    double best_mse = 0.0;
    double norm_mse = 0.0; // best_mse / variance of the training target
    double diversity = 0.0;
    double median_case_depth = 0.0;
    double sel_time_ms = 0.0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const GenerationMetrics& m);

/// Steady-state-free generational engine: each step builds a full child
/// population (one parent-selection event per slot), applies variation and
/// the method's survival rule, then records one metrics row. All draws come
/// from streams of (config.seed, generation, slot), so runs reproduce
/// exactly regardless of scheduling.
class Engine {
public:
    Engine(Dataset train, EngineConfig cfg);

    void step();
    void run(); // cfg.generations steps

    const std::vector<Individual>& population() const { return pop_; }
    const std::vector<GenerationMetrics>& metrics() const { return metrics_; }
    const Dataset& train() const { return train_; }
    const Individual& best() const;

    /// Mean squared error of `ind` on an arbitrary dataset (test split).
    double mse_on(const Individual& ind, const Dataset& data) const;

private:
    void evaluate_individual(Individual& ind);
    Individual fresh_individual(Rng& rng);
    ErrorMatrix error_matrix() const;
    std::vector<SelectionEvent> select(const ErrorMatrix& em, std::uint64_t gen_seed);
    void step_generational();
    void step_age_fitness();
    void step_crowding();
    void record_metrics(const std::vector<SelectionEvent>& events, double sel_ms);
    Rng stream(std::uint64_t salt, std::uint64_t a, std::uint64_t b = 0) const;

    Dataset train_;
    EngineConfig cfg_;
    double target_variance_ = 0.0;
    std::size_t generation_ = 0;
    std::vector<Individual> pop_;
    std::vector<GenerationMetrics> metrics_;
};

} // namespace lexsel::gp
