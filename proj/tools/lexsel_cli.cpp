// Command line front end: analyze an error matrix, run a comparison
// experiment from a spec file, time a population-size sweep, or emit the
// synthetic uball5d dataset. Every command is deterministic for a fixed
// seed except reported wall-clock columns.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lexsel/analysis.hpp"
#include "lexsel/dataset.hpp"
#include "lexsel/error_matrix.hpp"
#include "lexsel/experiment.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string token;
    while (std::getline(in, token, ',')) {
        const auto b = token.find_first_not_of(" \t");
        const auto e = token.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : token.substr(b, e - b + 1));
    }
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    for (const auto& tok : split_csv(s)) {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad size '" + tok + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<lexsel::gp::EngineMethod> parse_method_list(const std::string& s) {
    std::vector<lexsel::gp::EngineMethod> out;
    for (const auto& tok : split_csv(s)) {
        const auto m = lexsel::method_from_name(tok);
        if (!m) throw std::invalid_argument("unknown method '" + tok + "'");
        out.push_back(*m);
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot write " + out_path);
    f << text;
}

struct AnalyzeArgs {
    std::string matrix_path;
    std::string methods;
    std::string eps = "static";
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t tournament_size = 2;
    std::string out;
};

int cmd_analyze(const AnalyzeArgs& a) {
    lexsel::AnalyzeOptions opt;
    if (!a.methods.empty()) opt.methods = split_csv(a.methods);
    opt.mc_variant = a.eps;
    opt.trials = a.trials;
    opt.seed = a.seed;
    opt.tournament_size = a.tournament_size;
    const auto matrix = lexsel::ErrorMatrix::from_csv(a.matrix_path);
    emit(lexsel::analyze_matrix(matrix, opt).to_json(), a.out);
    return 0;
}

struct RunArgs {
    std::string spec_path;
    std::string out_dir;
    std::size_t workers = SIZE_MAX; // SIZE_MAX = leave spec value alone
};

int cmd_run(const RunArgs& a) {
    lexsel::ExperimentSpec spec = lexsel::parse_spec_file(a.spec_path);
    if (!a.out_dir.empty()) spec.out_dir = a.out_dir;
    if (a.workers != SIZE_MAX) spec.workers = a.workers;
    const auto result = lexsel::run_experiment(spec);
    lexsel::write_experiment_files(result);
    std::cout << result.summary_json();
    return result.mean_rank.empty() ? 1 : 0;
}

struct SweepArgs {
    std::string pop_sizes = "50,200,800";
    std::size_t samples = 100;
    std::size_t trials = 1;
    std::size_t generations = 30;
    std::string methods = "ep-lex-s,ep-lex-sd,ep-lex-d";
    std::uint64_t seed = 0;
    std::string out_dir;
};

int cmd_sweep(const SweepArgs& a) {
    lexsel::SweepSpec spec;
    spec.pop_sizes = parse_sizes(a.pop_sizes);
    spec.samples = a.samples;
    spec.trials = a.trials;
    spec.generations = a.generations;
    spec.methods = parse_method_list(a.methods);
    spec.seed = a.seed;
    const auto result = lexsel::scaling_sweep(spec);
    if (!a.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(a.out_dir);
        emit(result.to_json(), (fs::path(a.out_dir) / "sweep.json").string());
        emit(result.table_csv(), (fs::path(a.out_dir) / "sweep.csv").string());
    }
    std::cout << result.to_json();
    return 0;
}

struct GenArgs {
    std::size_t samples = 200;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    emit(lexsel::gen_uball5d(a.samples, a.seed).to_csv(), a.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lexicase selection analysis and benchmarking"};
    app.require_subcommand(1);

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand(
        "analyze", "selection probabilities and front membership for an error matrix");
    analyze->add_option("matrix", aa.matrix_path, "CSV of errors, one row per individual")
        ->required();
    analyze->add_option("--method", aa.methods,
                        "comma list of lex,tourn,ep-lex-s,ep-lex-sd,ep-lex-d (default all)");
    analyze->add_option("--eps", aa.eps,
                        "Monte-Carlo scheme: none, static, semidynamic or dynamic")
        ->check(CLI::IsMember({"none", "static", "semidynamic", "dynamic"}));
    analyze->add_option("--trials", aa.trials, "Monte-Carlo trials (0 disables sampling)");
    analyze->add_option("--seed", aa.seed, "Monte-Carlo seed");
    analyze->add_option("--tournament-size", aa.tournament_size, "tournament size for tourn");
    analyze->add_option("--out", aa.out, "write the JSON report here instead of stdout");

    RunArgs ra;
    auto* run = app.add_subcommand("run", "run a comparison experiment from a spec file");
    run->add_option("spec", ra.spec_path, "key = value experiment spec")->required();
    run->add_option("--out-dir", ra.out_dir, "override the spec output directory");
    run->add_option("--workers", ra.workers, "override the spec worker count");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "time engine runs across population sizes");
    sweep->add_option("--pop-sizes", sa.pop_sizes, "comma list of population sizes");
    sweep->add_option("--samples", sa.samples, "synthetic dataset size");
    sweep->add_option("--trials", sa.trials, "timed repeats per size");
    sweep->add_option("--generations", sa.generations, "generations per run");
    sweep->add_option("--methods", sa.methods, "comma list of methods to time");
    sweep->add_option("--seed", sa.seed, "base seed");
    sweep->add_option("--out", sa.out_dir, "directory for sweep.json and sweep.csv");

    GenArgs ga;
    auto* gen = app.add_subcommand("gen-uball5d", "emit the synthetic uball5d dataset as CSV");
    gen->add_option("--samples", ga.samples, "number of samples");
    gen->add_option("--seed", ga.seed, "generation seed");
    gen->add_option("--out", ga.out, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
        if (analyze->parsed()) return cmd_analyze(aa);
        if (run->parsed()) return cmd_run(ra);
        if (sweep->parsed()) return cmd_sweep(sa);
        if (gen->parsed()) return cmd_gen(ga);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
