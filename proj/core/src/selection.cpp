#include "lexsel/selection.hpp"

#include <algorithm>
#include <stdexcept>

#include "lexicase_filter.hpp"

namespace lexsel {

PassMatrix::PassMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> flags)
    : rows_(rows), cols_(cols), flags_(std::move(flags)) {
    if (rows_ == 0 || cols_ == 0)
        throw std::invalid_argument("PassMatrix: need at least one row and one column");
    if (flags_.size() != rows_ * cols_)
        throw std::invalid_argument("PassMatrix: flag count does not match rows*cols");
    for (auto f : flags_)
        if (f > 1) throw std::invalid_argument("PassMatrix: flags must be 0 or 1");
}

PassMatrix build_pass_matrix(const ErrorMatrix& errors, const EpsilonVector& eps) {
    if (eps.size() != errors.cols())
        throw std::invalid_argument("build_pass_matrix: epsilon length mismatch");
    std::vector<std::uint8_t> flags(errors.rows() * errors.cols());
    for (std::size_t t = 0; t < errors.cols(); ++t) {
        const double cut = errors.column_min(t) + eps[t];
        for (std::size_t i = 0; i < errors.rows(); ++i)
            flags[i * errors.cols() + t] = detail::within_cut(errors(i, t), cut) ? 0 : 1;
    }
    return PassMatrix(errors.rows(), errors.cols(), std::move(flags));
}

namespace {

template <typename Step>
SelectionEvent run_event(std::size_t rows, std::size_t cases, const Step& step, Rng& rng) {
    auto order = rng.permutation(cases);
    auto pool = detail::full_pool(rows);
    const std::size_t used = detail::filter_by_order(pool, order, step);
    order.resize(used);
    SelectionEvent ev;
    ev.selected = pool.size() == 1 ? pool[0] : pool[rng.below(pool.size())];
    ev.case_order = std::move(order);
    ev.final_pool_size = pool.size();
    return ev;
}

} // namespace

SelectionEvent lexicase_select_one(const ErrorMatrix& errors, Rng& rng) {
    return run_event(errors.rows(), errors.cols(), detail::ExactStep{&errors}, rng);
}

SelectionEvent eps_lexicase_static_select_one(const PassMatrix& pass, Rng& rng) {
    return run_event(pass.rows(), pass.cols(), detail::PassStep{&pass}, rng);
}

SelectionEvent eps_lexicase_semidynamic_select_one(const ErrorMatrix& errors,
                                                   const EpsilonVector& eps,
                                                   Rng& rng) {
    if (eps.size() != errors.cols())
        throw std::invalid_argument("eps_lexicase_semidynamic_select_one: epsilon length mismatch");
    return run_event(errors.rows(), errors.cols(),
                     detail::EpsStep{&errors, eps.data()}, rng);
}

SelectionEvent eps_lexicase_dynamic_select_one(const ErrorMatrix& errors, Rng& rng) {
    return run_event(errors.rows(), errors.cols(), detail::DynamicStep{&errors, {}}, rng);
}

SelectionEvent tournament_select_one(const FitnessVector& fitness,
                                     std::size_t r,
                                     Rng& rng) {
    if (fitness.empty()) throw std::invalid_argument("tournament_select_one: empty fitness");
    if (r == 0) throw std::invalid_argument("tournament_select_one: tournament size must be positive");
    std::vector<std::size_t> drawn(r);
    for (auto& d : drawn) d = rng.below(fitness.size());
    double best = fitness[drawn[0]];
    for (auto d : drawn) best = std::min(best, fitness[d]);
    std::vector<std::size_t> tied;
    for (auto d : drawn)
        if (fitness[d] == best) tied.push_back(d);
    SelectionEvent ev;
    ev.selected = tied.size() == 1 ? tied[0] : tied[rng.below(tied.size())];
    ev.final_pool_size = tied.size();
    return ev;
}

SelectionEvent random_select_one(std::size_t population, Rng& rng) {
    if (population == 0) throw std::invalid_argument("random_select_one: empty population");
    SelectionEvent ev;
    ev.selected = rng.below(population);
    return ev;
}

std::vector<SelectionEvent> select_parents(const ErrorMatrix& errors,
                                           const SelectionConfig& cfg,
                                           std::uint64_t seed) {
    const std::size_t n = cfg.events ? cfg.events : errors.rows();
    std::vector<SelectionEvent> events;
    events.reserve(n);

    // variant-wide precomputation happens once, outside the event loop
    EpsilonVector eps;
    if (cfg.method == SelectionMethod::eps_static ||
        cfg.method == SelectionMethod::eps_semidynamic)
        eps = epsilon_static(errors);
    PassMatrix pass = cfg.method == SelectionMethod::eps_static
                          ? build_pass_matrix(errors, eps)
                          : PassMatrix(1, 1, {0});
    FitnessVector fitness;
    if (cfg.method == SelectionMethod::tournament)
        fitness = aggregate_fitness(errors, FitnessMetric::mean_of_values);

    for (std::size_t k = 0; k < n; ++k) {
        Rng rng = Rng::stream(seed, k);
        switch (cfg.method) {
        case SelectionMethod::random_uniform:
            events.push_back(random_select_one(errors.rows(), rng));
            break;
        case SelectionMethod::tournament:
            events.push_back(tournament_select_one(fitness, cfg.tournament_size, rng));
            break;
        case SelectionMethod::lexicase:
            events.push_back(lexicase_select_one(errors, rng));
            break;
        case SelectionMethod::eps_static:
            events.push_back(eps_lexicase_static_select_one(pass, rng));
            break;
        case SelectionMethod::eps_semidynamic:
            events.push_back(eps_lexicase_semidynamic_select_one(errors, eps, rng));
            break;
        case SelectionMethod::eps_dynamic:
            events.push_back(eps_lexicase_dynamic_select_one(errors, rng));
            break;
        }
    }
    return events;
}

} // namespace lexsel
