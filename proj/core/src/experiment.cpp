#include "lexsel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace lexsel {

namespace {

constexpr std::uint64_t kDataSalt = 0xda7a;
constexpr std::uint64_t kSplitSalt = 0x5117;
constexpr std::uint64_t kEngineSalt = 0xe9;

const std::pair<const char*, gp::EngineMethod> kMethodNames[] = {
    {"rand", gp::EngineMethod::random_uniform},
    {"tourn", gp::EngineMethod::tournament},
    {"lex", gp::EngineMethod::lexicase},
    {"ep-lex-s", gp::EngineMethod::eps_static},
    {"ep-lex-sd", gp::EngineMethod::eps_semidynamic},
    {"ep-lex-d", gp::EngineMethod::eps_dynamic},
    {"afp", gp::EngineMethod::age_fitness_pareto},
    {"dc", gp::EngineMethod::deterministic_crowding},
};

} // namespace

std::string method_name(gp::EngineMethod m) {
    for (const auto& [name, method] : kMethodNames)
        if (method == m) return name;
    return "?";
}

std::optional<gp::EngineMethod> method_from_name(const std::string& name) {
    for (const auto& [n, method] : kMethodNames)
        if (name == n) return method;
    return std::nullopt;
}

namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<gp::EngineMethod> parse_methods(const std::string& csv) {
    std::vector<gp::EngineMethod> out;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        const std::string name = strip(token);
        if (auto m = method_from_name(name)) out.push_back(*m);
        else throw std::invalid_argument("unknown method '" + name + "'");
    }
    if (out.empty()) throw std::invalid_argument("empty method list");
    return out;
}

template <typename T>
T parse_as(const std::string& value, const std::string& key);

template <>
double parse_as<double>(const std::string& value, const std::string& key) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != value.size())
        throw std::invalid_argument("bad numeric value for '" + key + "': " + value);
    return v;
}

template <>
std::size_t parse_as<std::size_t>(const std::string& value, const std::string& key) {
    const double v = parse_as<double>(value, key);
    if (v < 0 || v != std::floor(v))
        throw std::invalid_argument("'" + key + "' wants a nonnegative integer, got " + value);
    return static_cast<std::size_t>(v);
}

template <>
bool parse_as<bool>(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("'" + key + "' wants true/false, got " + value);
}

} // namespace

ExperimentSpec parse_spec_text(const std::string& text) {
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("spec line " + std::to_string(line_no) +
                                        " is not key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));

        if (key == "dataset") spec.dataset = value;
        else if (key == "target") spec.target = value;
        else if (key == "samples") spec.samples = parse_as<std::size_t>(value, key);
        else if (key == "split") spec.split = parse_as<double>(value, key);
        else if (key == "trials") spec.trials = parse_as<std::size_t>(value, key);
        else if (key == "seed") spec.seed = parse_as<std::size_t>(value, key);
        else if (key == "methods") spec.methods = parse_methods(value);
        else if (key == "out_dir") spec.out_dir = value;
        else if (key == "workers") spec.workers = parse_as<std::size_t>(value, key);
        else if (key == "population_size")
            spec.engine.population_size = parse_as<std::size_t>(value, key);
        else if (key == "generations")
            spec.engine.generations = parse_as<std::size_t>(value, key);
        else if (key == "crossover_rate")
            spec.engine.crossover_rate = parse_as<double>(value, key);
        else if (key == "mutation_rate")
            spec.engine.mutation_rate = parse_as<double>(value, key);
        else if (key == "tournament_size")
            spec.engine.tournament_size = parse_as<std::size_t>(value, key);
        else if (key == "keep_best") spec.engine.keep_best = parse_as<bool>(value, key);
        else
            throw std::invalid_argument("spec line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
    }
    if (spec.methods.empty())
        throw std::invalid_argument("spec needs a methods = ... line");
    if (spec.trials == 0)
        throw std::invalid_argument("spec needs trials >= 1");
    return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open spec file " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_spec_text(buf.str());
}

std::vector<double> ranks_with_ties(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> ranks(scores.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

namespace {

Dataset resolve_dataset(const ExperimentSpec& spec, std::size_t trial) {
    if (spec.dataset == "uball5d") {
        const std::uint64_t s = Rng::stream(spec.seed ^ kDataSalt, trial).next();
        return gen_uball5d(spec.samples, s);
    }
    return load_csv(spec.dataset, spec.target).data;
}

} // namespace

TrialResult run_single(const ExperimentSpec& spec, gp::EngineMethod method,
                       std::size_t trial) {
    TrialResult result;
    result.method = method_name(method);
    result.trial = trial;
    try {
        const Dataset data = resolve_dataset(spec, trial);
        const std::uint64_t split_seed = Rng::stream(spec.seed ^ kSplitSalt, trial).next();
        const auto split = train_test_split(data.samples(), spec.split, split_seed);
        const Dataset train = data.subset(split.train);
        const Dataset test = data.subset(split.test);

        gp::EngineConfig cfg = spec.engine;
        cfg.method = method;
        cfg.seed = Rng::stream(spec.seed ^ kEngineSalt, trial).next();
        gp::Engine engine(train, cfg);
        engine.run();

        result.final_train_mse = engine.best().mse;
        result.test_mse = engine.mse_on(engine.best(), test);
        result.metrics = engine.metrics();
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult out;
    out.spec = spec;
    const std::size_t jobs = spec.methods.size() * spec.trials;
    out.trials.resize(jobs);

    std::size_t workers = spec.workers ? spec.workers
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, jobs);

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs) return;
            const auto method = spec.methods[j / spec.trials];
            const std::size_t trial = j % spec.trials;
            out.trials[j] = run_single(spec, method, trial);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // mean rank of per-trial test MSE; trials with any failed method are
    // excluded so every surviving rank compares the full roster
    std::vector<double> rank_acc(spec.methods.size(), 0.0);
    std::size_t ranked_trials = 0;
    for (std::size_t t = 0; t < spec.trials; ++t) {
        std::vector<double> scores(spec.methods.size());
        bool ok = true;
        for (std::size_t m = 0; m < spec.methods.size(); ++m) {
            const auto& tr = out.trials[m * spec.trials + t];
            ok = ok && tr.error.empty();
            scores[m] = tr.test_mse;
        }
        if (!ok) continue;
        const auto ranks = ranks_with_ties(scores);
        for (std::size_t m = 0; m < spec.methods.size(); ++m) rank_acc[m] += ranks[m];
        ++ranked_trials;
    }
    for (std::size_t m = 0; m < spec.methods.size(); ++m)
        out.mean_rank[method_name(spec.methods[m])] =
            ranked_trials ? rank_acc[m] / static_cast<double>(ranked_trials) : 0.0;
    return out;
}

std::string ExperimentResult::summary_json() const {
    using json = nlohmann::ordered_json;
    json j;
    j["dataset"] = spec.dataset;
    j["samples"] = spec.samples;
    j["split"] = spec.split;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["engine"] = {{"population_size", spec.engine.population_size},
                   {"generations", spec.engine.generations},
                   {"crossover_rate", spec.engine.crossover_rate},
                   {"mutation_rate", spec.engine.mutation_rate},
                   {"tournament_size", spec.engine.tournament_size},
                   {"keep_best", spec.engine.keep_best}};
    json methods = json::array();
    for (const auto m : spec.methods) methods.push_back(method_name(m));
    j["methods"] = std::move(methods);

    json results = json::object();
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
        const std::string name = method_name(spec.methods[m]);
        json test = json::array(), train = json::array();
        for (std::size_t t = 0; t < spec.trials; ++t) {
            const auto& tr = trials[m * spec.trials + t];
            if (!tr.error.empty()) continue;
            test.push_back(tr.test_mse);
            train.push_back(tr.final_train_mse);
        }
        results[name] = {{"test_mse", std::move(test)},
                         {"final_train_mse", std::move(train)},
                         {"mean_rank", mean_rank.at(name)}};
    }
    j["results"] = std::move(results);

    json errors = json::array();
    for (const auto& tr : trials)
        if (!tr.error.empty())
            errors.push_back({{"method", tr.method},
                              {"trial", tr.trial},
                              {"message", tr.error}});
    j["errors"] = std::move(errors);
    return j.dump(2) + "\n";
}

void write_experiment_files(const ExperimentResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(result.spec.out_dir);
    for (const auto& tr : result.trials) {
        if (!tr.error.empty()) continue;
        const fs::path p = fs::path(result.spec.out_dir) /
                           ("metrics_" + tr.method + "_t" + std::to_string(tr.trial) + ".csv");
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f << gp::metrics_csv_header() << '\n';
        for (const auto& m : tr.metrics) f << gp::metrics_csv_row(m) << '\n';
    }
    const fs::path p = fs::path(result.spec.out_dir) / "summary.json";
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << result.summary_json();
}

SweepResult scaling_sweep(const SweepSpec& spec) {
    if (spec.pop_sizes.size() < 3)
        throw std::invalid_argument("scaling_sweep: need at least three population sizes");
    for (auto n : spec.pop_sizes)
        if (n < 2) throw std::invalid_argument("scaling_sweep: population sizes must be >= 2");
    if (spec.methods.empty())
        throw std::invalid_argument("scaling_sweep: need at least one method");
    if (spec.trials == 0)
        throw std::invalid_argument("scaling_sweep: need at least one trial");

    const Dataset data =
        gen_uball5d(spec.samples, Rng::stream(spec.seed ^ kDataSalt, 0).next());
    const auto split =
        train_test_split(data.samples(), spec.split,
                         Rng::stream(spec.seed ^ kSplitSalt, 0).next());
    const Dataset train = data.subset(split.train);

    SweepResult out;
    out.spec = spec;
    for (const auto method : spec.methods) {
        SweepFit fit;
        for (const std::size_t pop : spec.pop_sizes) {
            double total = 0.0;
            for (std::size_t t = 0; t < spec.trials; ++t) {
                gp::EngineConfig cfg = spec.engine;
                cfg.method = method;
                cfg.population_size = pop;
                cfg.generations = spec.generations;
                cfg.seed = Rng::stream(spec.seed ^ kEngineSalt, pop, t).next();
                const auto t0 = std::chrono::steady_clock::now();
                gp::Engine engine(train, cfg);
                engine.run();
                const auto t1 = std::chrono::steady_clock::now();
                total += std::chrono::duration<double>(t1 - t0).count();
            }
            fit.seconds.push_back(total / static_cast<double>(spec.trials));
        }

        // least squares on log(seconds) = a + b log(pop)
        const std::size_t n = spec.pop_sizes.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::log(static_cast<double>(spec.pop_sizes[i]));
            const double y = std::log(std::max(fit.seconds[i], 1e-9));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double denom = static_cast<double>(n) * sxx - sx * sx;
        fit.exponent = (static_cast<double>(n) * sxy - sx * sy) / denom;
        fit.intercept = (sy - fit.exponent * sx) / static_cast<double>(n);
        out.fits[method_name(method)] = std::move(fit);
    }
    return out;
}

std::string SweepResult::to_json() const {
    using json = nlohmann::ordered_json;
    json j;
    j["pop_sizes"] = spec.pop_sizes;
    j["samples"] = spec.samples;
    j["generations"] = spec.generations;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    json fits_j = json::object();
    for (const auto& [name, fit] : fits)
        fits_j[name] = {{"seconds", fit.seconds},
                        {"intercept", fit.intercept},
                        {"exponent", fit.exponent}};
    j["fits"] = std::move(fits_j);
    return j.dump(2) + "\n";
}

std::string SweepResult::table_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "method,pop_size,mean_seconds\n";
    for (const auto& [name, fit] : fits)
        for (std::size_t i = 0; i < spec.pop_sizes.size(); ++i)
            out << name << ',' << spec.pop_sizes[i] << ',' << fit.seconds[i] << '\n';
    return out.str();
}

} // namespace lexsel
