#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <vector>

#include "lexsel/experiment.hpp"

using namespace lexsel;

namespace {

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.samples = 20;
    spec.trials = 2;
    spec.seed = 3;
    spec.methods = {gp::EngineMethod::tournament, gp::EngineMethod::eps_semidynamic};
    spec.engine.population_size = 8;
    spec.engine.generations = 3;
    spec.workers = 1;
    return spec;
}

} // namespace

TEST_CASE("method names round trip") {
    using gp::EngineMethod;
    for (const auto m : {EngineMethod::random_uniform, EngineMethod::tournament,
                         EngineMethod::lexicase, EngineMethod::eps_static,
                         EngineMethod::eps_semidynamic, EngineMethod::eps_dynamic,
                         EngineMethod::age_fitness_pareto,
                         EngineMethod::deterministic_crowding}) {
        const auto name = method_name(m);
        REQUIRE(method_from_name(name).has_value());
        CHECK(*method_from_name(name) == m);
    }
    CHECK(!method_from_name("bogus").has_value());
}

TEST_CASE("spec text parsing") {
    const std::string text =
        "# comparison config\n"
        "dataset = uball5d\n"
        "samples = 50   # inline comment\n"
        "split = 0.8\n"
        "trials = 4\n"
        "seed = 17\n"
        "methods = tourn, lex,\tep-lex-sd\n"
        "population_size = 30\n"
        "generations = 5\n"
        "crossover_rate = 0.7\n"
        "mutation_rate = 0.3\n"
        "tournament_size = 3\n"
        "keep_best = false\n"
        "out_dir = /tmp/somewhere\n"
        "workers = 2\n";
    const auto spec = parse_spec_text(text);
    CHECK(spec.dataset == "uball5d");
    CHECK(spec.samples == 50);
    CHECK(spec.split == 0.8);
    CHECK(spec.trials == 4);
    CHECK(spec.seed == 17);
    REQUIRE(spec.methods.size() == 3);
    CHECK(spec.methods[1] == gp::EngineMethod::lexicase);
    CHECK(spec.engine.population_size == 30);
    CHECK(spec.engine.generations == 5);
    CHECK(spec.engine.crossover_rate == 0.7);
    CHECK(spec.engine.tournament_size == 3);
    CHECK(spec.engine.keep_best == false);
    CHECK(spec.out_dir == "/tmp/somewhere");
    CHECK(spec.workers == 2);

    CHECK_THROWS_WITH_AS((void)parse_spec_text("methods = lex\nnope = 1\n"),
                         doctest::Contains("line 2"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_spec_text("methods = lex\nsamples = abc\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_spec_text("methods = lex\nsamples = 1.5\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_spec_text("methods = warp\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_spec_text("samples = 5\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_spec_text("methods = lex\ntrials = 0\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)parse_spec_text("just words\n"), std::invalid_argument);
}

TEST_CASE("ranks with ties") {
    CHECK(ranks_with_ties(std::vector<double>{3, 1, 2}) == std::vector<double>{3, 1, 2});
    CHECK(ranks_with_ties(std::vector<double>{1, 1, 2}) ==
          std::vector<double>{1.5, 1.5, 3});
    CHECK(ranks_with_ties(std::vector<double>{5, 5, 5, 5}) ==
          std::vector<double>{2.5, 2.5, 2.5, 2.5});
    CHECK(ranks_with_ties(std::vector<double>{}) == std::vector<double>{});
    CHECK(ranks_with_ties(std::vector<double>{2, 7, 7, 1}) ==
          std::vector<double>{2, 3.5, 3.5, 1});
}

TEST_CASE("single trial runs produce full metrics") {
    const auto spec = tiny_spec();
    const auto r = run_single(spec, gp::EngineMethod::tournament, 0);
    CHECK(r.error.empty());
    CHECK(r.method == "tourn");
    CHECK(r.metrics.size() == spec.engine.generations);
    CHECK(r.final_train_mse >= 0.0);
    CHECK(r.test_mse >= 0.0);

    // failures are reported, not thrown
    auto bad = spec;
    bad.dataset = "/definitely/not/here.csv";
    const auto rb = run_single(bad, gp::EngineMethod::tournament, 0);
    CHECK(!rb.error.empty());
}

TEST_CASE("experiment grids are worker-count independent") {
    auto spec = tiny_spec();
    const auto serial = run_experiment(spec);
    spec.workers = 3;
    const auto parallel = run_experiment(spec);
    CHECK(serial.summary_json() == parallel.summary_json());
    REQUIRE(serial.trials.size() == 4); // 2 methods x 2 trials
    for (const auto& tr : serial.trials) CHECK(tr.error.empty());
    CHECK(serial.mean_rank.size() == 2);
    // two methods, so per-trial ranks are {1,2}; means stay inside
    for (const auto& [name, rank] : serial.mean_rank) {
        CHECK(rank >= 1.0);
        CHECK(rank <= 2.0);
    }
}

TEST_CASE("experiment files land in the output directory") {
    namespace fs = std::filesystem;
    auto spec = tiny_spec();
    spec.out_dir = (fs::temp_directory_path() / "lexsel_exp_test").string();
    fs::remove_all(spec.out_dir);

    const auto result = run_experiment(spec);
    write_experiment_files(result);
    CHECK(fs::exists(fs::path(spec.out_dir) / "summary.json"));
    CHECK(fs::exists(fs::path(spec.out_dir) / "metrics_tourn_t0.csv"));
    CHECK(fs::exists(fs::path(spec.out_dir) / "metrics_ep-lex-sd_t1.csv"));

    std::ifstream f(fs::path(spec.out_dir) / "metrics_tourn_t0.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == gp::metrics_csv_header());
    std::size_t rows = 0;
    for (std::string line; std::getline(f, line);) ++rows;
    CHECK(rows == spec.engine.generations);
    fs::remove_all(spec.out_dir);
}

TEST_CASE("scaling sweep guards and fit output") {
    SweepSpec s;
    s.methods = {gp::EngineMethod::tournament};
    s.pop_sizes = {4, 6};
    CHECK_THROWS_AS((void)scaling_sweep(s), std::invalid_argument);
    s.pop_sizes = {4, 6, 8};
    s.methods = {};
    CHECK_THROWS_AS((void)scaling_sweep(s), std::invalid_argument);

    s.methods = {gp::EngineMethod::tournament};
    s.samples = 10;
    s.generations = 1;
    const auto result = scaling_sweep(s);
    REQUIRE(result.fits.count("tourn") == 1);
    const auto& fit = result.fits.at("tourn");
    REQUIRE(fit.seconds.size() == 3);
    for (const auto sec : fit.seconds) CHECK(sec > 0.0);
    CHECK(std::isfinite(fit.exponent));
    CHECK(std::isfinite(fit.intercept));
    CHECK(result.to_json().find("\"tourn\"") != std::string::npos);
    CHECK(result.table_csv().rfind("method,pop_size,mean_seconds\n", 0) == 0);
}
