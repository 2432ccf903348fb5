#include "lexsel/probability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "lexicase_filter.hpp"

namespace lexsel {

bool is_probability_vector(const ProbabilityVector& p, double tol) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0 + tol)) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
}

namespace {

struct StateKey {
    std::uint64_t pool;
    std::uint32_t cases;
    bool operator==(const StateKey&) const = default;
};

struct StateHash {
    std::size_t operator()(const StateKey& k) const {
        std::uint64_t h = k.pool * 0x9e3779b97f4a7c15ull;
        h ^= (h >> 29) ^ (static_cast<std::uint64_t>(k.cases) * 0xbf58476d1ce4e5b9ull);
        return static_cast<std::size_t>(h ^ (h >> 32));
    }
};

// Vector-valued recursion: solve(pool, cases)[i] is the probability that i
// wins when the remaining shuffle is uniform over `cases` and the candidate
// pool is `pool`. One memo entry covers every individual at once.
template <typename ValueAt>
class ExactSolver {
public:
    ExactSolver(std::size_t rows, std::size_t cols, ValueAt value)
        : rows_(rows), cols_(cols), value_(value) {}

    ProbabilityVector run() {
        const std::uint64_t all_rows =
            rows_ == 64 ? ~0ull : (1ull << rows_) - 1;
        const std::uint32_t all_cases =
            cols_ == 32 ? ~0u : (1u << cols_) - 1;
        return solve(all_rows, all_cases);
    }

private:
    ProbabilityVector solve(std::uint64_t pool, std::uint32_t cases) {
        ProbabilityVector out(rows_, 0.0);
        if (std::popcount(pool) == 1) {
            out[static_cast<std::size_t>(std::countr_zero(pool))] = 1.0;
            return out;
        }
        if (cases == 0) {
            const double share = 1.0 / std::popcount(pool);
            for_each_bit(pool, [&](std::size_t i) { out[i] = share; });
            return out;
        }
        if (auto it = memo_.find({pool, cases}); it != memo_.end()) return it->second;

        const double w = 1.0 / std::popcount(cases);
        std::uint32_t rest = cases;
        while (rest) {
            const std::uint32_t t = static_cast<std::uint32_t>(std::countr_zero(rest));
            rest &= rest - 1;
            const auto sub = solve(survivors(pool, t), cases & ~(1u << t));
            for (std::size_t i = 0; i < rows_; ++i) out[i] += w * sub[i];
        }
        memo_.emplace(StateKey{pool, cases}, out);
        return out;
    }

    std::uint64_t survivors(std::uint64_t pool, std::uint32_t t) const {
        auto best = value_(static_cast<std::size_t>(std::countr_zero(pool)), t);
        for_each_bit(pool, [&](std::size_t i) { best = std::min(best, value_(i, t)); });
        std::uint64_t out = 0;
        for_each_bit(pool, [&](std::size_t i) {
            if (value_(i, t) == best) out |= 1ull << i;
        });
        return out;
    }

    template <typename Fn>
    static void for_each_bit(std::uint64_t mask, Fn fn) {
        while (mask) {
            fn(static_cast<std::size_t>(std::countr_zero(mask)));
            mask &= mask - 1;
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    ValueAt value_;
    std::unordered_map<StateKey, ProbabilityVector, StateHash> memo_;
};

void check_exact_limits(std::size_t rows, std::size_t cols, const ExactLimits& limits) {
    const std::size_t row_cap = std::min<std::size_t>(limits.max_individuals, 64);
    const std::size_t case_cap = std::min<std::size_t>(limits.max_cases, 32);
    if (rows > row_cap || cols > case_cap)
        throw CapacityError(
            "p_lex_exact: matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
            ", guard is " + std::to_string(row_cap) + "x" + std::to_string(case_cap) +
            "; use p_lex_monte_carlo for larger inputs");
}

} // namespace

ProbabilityVector p_lex_exact(const ErrorMatrix& errors, ExactLimits limits) {
    check_exact_limits(errors.rows(), errors.cols(), limits);
    ExactSolver solver(errors.rows(), errors.cols(),
                       [&](std::size_t i, std::size_t t) { return errors(i, t); });
    return solver.run();
}

ProbabilityVector p_lex_exact(const PassMatrix& pass, ExactLimits limits) {
    check_exact_limits(pass.rows(), pass.cols(), limits);
    ExactSolver solver(pass.rows(), pass.cols(),
                       [&](std::size_t i, std::size_t t) { return pass(i, t); });
    return solver.run();
}

ProbabilityVector p_lex_exact(const ErrorMatrix& errors,
                              Elitism elitism,
                              ExactLimits limits) {
    if (elitism == Elitism::exact) return p_lex_exact(errors, limits);
    return p_lex_exact(build_pass_matrix(errors, epsilon_static(errors)), limits);
}

namespace {

std::size_t factorial(std::size_t n) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

template <typename Step>
ProbabilityVector enumerate_orders(std::size_t rows, std::size_t cols, const Step& step) {
    ProbabilityVector p(rows, 0.0);
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    const double w = 1.0 / static_cast<double>(factorial(cols));
    do {
        auto pool = detail::full_pool(rows);
        detail::filter_by_order(pool, order, step);
        const double share = w / static_cast<double>(pool.size());
        for (auto i : pool) p[i] += share;
    } while (std::next_permutation(order.begin(), order.end()));
    return p;
}

EpsilonVector resolve_eps(const ErrorMatrix& errors,
                          const std::optional<EpsilonVector>& eps) {
    if (!eps) return epsilon_static(errors);
    if (eps->size() != errors.cols())
        throw std::invalid_argument("epsilon length does not match the case count");
    return *eps;
}

} // namespace

ProbabilityVector p_lex_enumerate(const ErrorMatrix& errors,
                                  SelectionMethod variant,
                                  const std::optional<EpsilonVector>& eps,
                                  std::size_t max_cases) {
    switch (variant) {
    case SelectionMethod::lexicase:
    case SelectionMethod::eps_static:
    case SelectionMethod::eps_semidynamic:
    case SelectionMethod::eps_dynamic:
        break;
    default:
        throw std::invalid_argument("p_lex_enumerate: not a lexicase-family variant");
    }
    if (errors.cols() > max_cases)
        throw CapacityError("p_lex_enumerate: " + std::to_string(errors.cols()) +
                            " cases exceed the factorial guard of " +
                            std::to_string(max_cases) +
                            "; use p_lex_monte_carlo for larger inputs");
    switch (variant) {
    case SelectionMethod::lexicase:
        return enumerate_orders(errors.rows(), errors.cols(),
                                detail::ExactStep{&errors});
    case SelectionMethod::eps_static: {
        const auto e = resolve_eps(errors, eps);
        const auto pass = build_pass_matrix(errors, e);
        return enumerate_orders(errors.rows(), errors.cols(), detail::PassStep{&pass});
    }
    case SelectionMethod::eps_semidynamic: {
        const auto e = resolve_eps(errors, eps);
        return enumerate_orders(errors.rows(), errors.cols(),
                                detail::EpsStep{&errors, e.data()});
    }
    case SelectionMethod::eps_dynamic:
        return enumerate_orders(errors.rows(), errors.cols(),
                                detail::DynamicStep{&errors, {}});
    default:
        throw std::invalid_argument("p_lex_enumerate: not a lexicase-family variant");
    }
}

McEstimate p_lex_monte_carlo(const ErrorMatrix& errors,
                             SelectionMethod variant,
                             const std::optional<EpsilonVector>& eps,
                             std::size_t trials,
                             std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("p_lex_monte_carlo: need at least one trial");

    EpsilonVector e;
    if (variant == SelectionMethod::eps_static || variant == SelectionMethod::eps_semidynamic)
        e = resolve_eps(errors, eps);
    std::optional<PassMatrix> pass;
    if (variant == SelectionMethod::eps_static) pass.emplace(build_pass_matrix(errors, e));

    std::vector<std::uint64_t> counts(errors.rows(), 0);
    for (std::size_t k = 0; k < trials; ++k) {
        Rng rng = Rng::stream(seed, k);
        SelectionEvent ev;
        switch (variant) {
        case SelectionMethod::lexicase:
            ev = lexicase_select_one(errors, rng);
            break;
        case SelectionMethod::eps_static:
            ev = eps_lexicase_static_select_one(*pass, rng);
            break;
        case SelectionMethod::eps_semidynamic:
            ev = eps_lexicase_semidynamic_select_one(errors, e, rng);
            break;
        case SelectionMethod::eps_dynamic:
            ev = eps_lexicase_dynamic_select_one(errors, rng);
            break;
        default:
            throw std::invalid_argument("p_lex_monte_carlo: not a lexicase-family variant");
        }
        ++counts[ev.selected];
    }

    McEstimate est;
    est.p.resize(errors.rows());
    est.stderrs.resize(errors.rows());
    for (std::size_t i = 0; i < errors.rows(); ++i) {
        const double p = static_cast<double>(counts[i]) / static_cast<double>(trials);
        est.p[i] = p;
        est.stderrs[i] = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
    return est;
}

ProbabilityVector p_tournament(const FitnessVector& fitness, std::size_t r) {
    if (fitness.empty()) throw std::invalid_argument("p_tournament: empty fitness");
    if (r == 0) throw std::invalid_argument("p_tournament: tournament size must be positive");

    // rank classes: ascending distinct fitness values (exact ties share one)
    std::vector<double> levels(fitness.begin(), fitness.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    const double n = static_cast<double>(fitness.size());
    ProbabilityVector p(fitness.size(), 0.0);
    // count of individuals at or worse than each level, walked from the best
    std::size_t at_or_worse = fitness.size();
    for (double level : levels) {
        std::size_t class_size = 0;
        for (double f : fitness)
            if (f == level) ++class_size;
        const double incl = static_cast<double>(at_or_worse) / n;
        const double excl = static_cast<double>(at_or_worse - class_size) / n;
        const double class_p =
            (std::pow(incl, static_cast<double>(r)) - std::pow(excl, static_cast<double>(r))) /
            static_cast<double>(class_size);
        for (std::size_t i = 0; i < fitness.size(); ++i)
            if (fitness[i] == level) p[i] = class_p;
        at_or_worse -= class_size;
    }
    return p;
}

double p_first(std::size_t t_cases, std::size_t n_events) {
    if (t_cases == 0 || n_events == 0)
        throw std::invalid_argument("p_first: counts must be positive");
    const double t = static_cast<double>(t_cases);
    return 1.0 - std::pow((t - 1.0) / t, static_cast<double>(n_events));
}

EliteCaseSets elite_case_sets(const ErrorMatrix& errors,
                              const std::optional<EpsilonVector>& eps) {
    if (eps && eps->size() != errors.cols())
        throw std::invalid_argument("elite_case_sets: epsilon length mismatch");
    EliteCaseSets sets;
    sets.cases_of.resize(errors.rows());
    for (std::size_t t = 0; t < errors.cols(); ++t) {
        const double cut = errors.column_min(t) + (eps ? (*eps)[t] : 0.0);
        for (std::size_t i = 0; i < errors.rows(); ++i) {
            const bool keep = eps ? detail::within_cut(errors(i, t), cut)
                                  : errors(i, t) <= cut;
            if (keep) sets.cases_of[i].push_back(t);
        }
    }
    return sets;
}

} // namespace lexsel
