#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexsel/gp.hpp"

namespace lexsel {

std::string method_name(gp::EngineMethod m);
std::optional<gp::EngineMethod> method_from_name(const std::string& name);

/// One engine-comparison experiment: a dataset source, a seeded split, and
/// a roster of selection methods run for `trials` paired trials. Trial k
/// uses the same split and engine seed for every method, so per-trial
/// comparisons across methods are paired.
struct ExperimentSpec {
    std::string dataset = "uball5d"; // synthetic name or a CSV path
    std::string target = "y";
    std::size_t samples = 200; // synthetic generation only
    double split = 0.70;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    std::vector<gp::EngineMethod> methods;
    gp::EngineConfig engine;
    std::string out_dir = "results";
    std::size_t workers = 0; // 0 = hardware concurrency
};

/// Parses the flat key=value experiment format ('#' starts a comment).
/// Unknown keys and malformed values throw std::invalid_argument.
ExperimentSpec parse_spec_text(const std::string& text);
ExperimentSpec parse_spec_file(const std::string& path);

struct TrialResult {
    std::string method;
    std::size_t trial = 0;
    double final_train_mse = 0.0;
    double test_mse = 0.0;
    std::vector<gp::GenerationMetrics> metrics;
    /// Non-empty when the trial failed; the batch carries on regardless.
    std::string error;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<TrialResult> trials; // method-major, trial-minor order
    /// Mean across trials of the per-trial test-MSE rank (1 = best; exact
    /// ties share the average of their positions).
    std::map<std::string, double> mean_rank;

    std::string summary_json() const;
};

/// Ascending ranks with ties averaged: scores (3,1,2) rank as (3,1,2) and
/// (1,1,2) as (1.5,1.5,3).
std::vector<double> ranks_with_ties(std::span<const double> scores);

/// Runs one (method, trial) cell of the experiment grid.
TrialResult run_single(const ExperimentSpec& spec, gp::EngineMethod method,
                       std::size_t trial);

/// Runs the whole grid, methods x trials, fanned out over `workers`
/// threads. Results are identical for any worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Writes metrics_<method>_t<trial>.csv per trial plus summary.json.
void write_experiment_files(const ExperimentResult& result);

/// Wall-clock scaling probe: same dataset, growing population sizes.
struct SweepSpec {
    std::vector<std::size_t> pop_sizes;
    std::size_t samples = 100;
    std::size_t trials = 1;
    std::size_t generations = 30;
    double split = 0.70;
    std::uint64_t seed = 0;
    std::vector<gp::EngineMethod> methods;
    gp::EngineConfig engine;
};

struct SweepFit {
    std::vector<double> seconds; // mean runtime per population size
    double intercept = 0.0;      // a in log(sec) = a + b log(pop)
    double exponent = 0.0;       // b
};

struct SweepResult {
    SweepSpec spec;
    std::map<std::string, SweepFit> fits;

    std::string to_json() const;
    std::string table_csv() const;
};

/// Times full runs per (method, population size), averaged over trials, and
/// least-squares fits the runtime exponent. Needs >= 3 sizes; runs on one
/// worker so timings do not contend.
SweepResult scaling_sweep(const SweepSpec& spec);

} // namespace lexsel
