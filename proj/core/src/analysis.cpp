#include "lexsel/analysis.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "lexsel/pareto.hpp"

namespace lexsel {

namespace {

const std::vector<std::string> kAllMethods = {"lex", "tourn", "ep-lex-s",
                                              "ep-lex-sd", "ep-lex-d"};

bool wants(const std::vector<std::string>& chosen, const std::string& m) {
    return std::find(chosen.begin(), chosen.end(), m) != chosen.end();
}

SelectionMethod mc_variant_from(const std::string& name) {
    if (name == "none") return SelectionMethod::lexicase;
    if (name == "static") return SelectionMethod::eps_static;
    if (name == "semidynamic") return SelectionMethod::eps_semidynamic;
    if (name == "dynamic") return SelectionMethod::eps_dynamic;
    throw std::invalid_argument("analyze_matrix: unknown Monte-Carlo variant '" + name +
                                "' (expected none, static, semidynamic or dynamic)");
}

std::string mc_method_name(SelectionMethod m) {
    switch (m) {
    case SelectionMethod::lexicase: return "lex";
    case SelectionMethod::eps_static: return "ep-lex-s";
    case SelectionMethod::eps_semidynamic: return "ep-lex-sd";
    default: return "ep-lex-d";
    }
}

} // namespace

MatrixReport analyze_matrix(const ErrorMatrix& errors, const AnalyzeOptions& options) {
    auto chosen = options.methods.empty() ? kAllMethods : options.methods;
    for (const auto& m : chosen)
        if (!wants(kAllMethods, m))
            throw std::invalid_argument("analyze_matrix: unknown method '" + m + "'");

    MatrixReport report;
    report.rows = errors.rows();
    report.cols = errors.cols();
    report.epsilon = epsilon_static(errors);

    const auto note_capacity = [&](const std::string& what, const CapacityError& e) {
        report.notes.push_back(what + ": " + e.what());
    };

    for (const auto& name : kAllMethods) {
        if (!wants(chosen, name)) continue;
        MethodProbabilities probs;
        if (name == "tourn") {
            const auto fitness = aggregate_fitness(errors, FitnessMetric::mean_of_values);
            probs.closed_form = p_tournament(fitness, options.tournament_size);
        } else {
            SelectionMethod variant = SelectionMethod::lexicase;
            if (name == "ep-lex-s") variant = SelectionMethod::eps_static;
            else if (name == "ep-lex-sd") variant = SelectionMethod::eps_semidynamic;
            else if (name == "ep-lex-d") variant = SelectionMethod::eps_dynamic;

            if (name == "lex") {
                try {
                    probs.exact = p_lex_exact(errors);
                } catch (const CapacityError& e) {
                    note_capacity(name + " exact", e);
                }
            } else if (name == "ep-lex-s") {
                try {
                    probs.exact = p_lex_exact(errors, Elitism::pass_matrix);
                } catch (const CapacityError& e) {
                    note_capacity(name + " exact", e);
                }
            }
            try {
                probs.enumerated = p_lex_enumerate(errors, variant);
            } catch (const CapacityError& e) {
                note_capacity(name + " enumerate", e);
            }
        }
        report.methods.emplace_back(name, std::move(probs));
    }

    if (options.trials > 0) {
        const auto variant = mc_variant_from(options.mc_variant);
        auto est = p_lex_monte_carlo(errors, variant, std::nullopt, options.trials,
                                     options.seed);
        report.monte_carlo = MonteCarloBlock{mc_method_name(variant), options.trials,
                                             std::move(est.p), std::move(est.stderrs)};
    }

    report.pareto = pareto_set(errors);
    report.boundary = boundary_set(errors);
    report.eps_pareto = eps_pareto_set(errors, report.epsilon);
    report.eps_boundary = eps_boundary_set(errors, report.epsilon);
    return report;
}

std::string MatrixReport::to_json() const {
    using json = nlohmann::ordered_json;
    json j;
    j["rows"] = rows;
    j["cols"] = cols;
    j["epsilon"] = epsilon;
    json jm = json::object();
    for (const auto& [name, probs] : methods) {
        json entry = json::object();
        if (probs.exact) entry["exact"] = *probs.exact;
        if (probs.enumerated) entry["enumerate"] = *probs.enumerated;
        if (probs.closed_form) entry["closed_form"] = *probs.closed_form;
        jm[name] = std::move(entry);
    }
    j["methods"] = std::move(jm);
    if (monte_carlo) {
        j["monte_carlo"] = {{"method", monte_carlo->method},
                            {"trials", monte_carlo->trials},
                            {"p", monte_carlo->p},
                            {"stderr", monte_carlo->stderrs}};
    }
    j["pareto"] = {{"set", pareto},
                   {"boundary", boundary},
                   {"eps_set", eps_pareto},
                   {"eps_boundary", eps_boundary}};
    j["notes"] = notes;
    return j.dump(2) + "\n";
}

} // namespace lexsel
