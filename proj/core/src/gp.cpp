#include "lexsel/gp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lexsel/pareto.hpp"

namespace lexsel::gp {

ProgramTree::ProgramTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty())
        throw std::invalid_argument("ProgramTree: empty node list");
    std::size_t need = 1;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        if (need == 0)
            throw std::invalid_argument("ProgramTree: trailing nodes after the root expression");
        need = need - 1 + static_cast<std::size_t>(arity(nodes_[k].op));
    }
    if (need != 0)
        throw std::invalid_argument("ProgramTree: truncated expression");
}

std::size_t ProgramTree::subtree_end(std::size_t i) const {
    if (i >= nodes_.size())
        throw std::invalid_argument("ProgramTree::subtree_end: position out of range");
    std::size_t need = 1, k = i;
    while (need > 0) {
        need = need - 1 + static_cast<std::size_t>(arity(nodes_[k].op));
        ++k;
    }
    return k;
}

std::size_t ProgramTree::min_width() const {
    std::size_t w = 0;
    for (const Node& n : nodes_)
        if (n.op == Op::var) w = std::max<std::size_t>(w, n.index + 1u);
    return w;
}

namespace {

double eval_with_stack(const ProgramTree& t, std::span<const double> x,
                       std::vector<double>& st) {
    st.clear();
    const auto& nodes = t.nodes();
    for (std::size_t k = nodes.size(); k-- > 0;) {
        const Node& nd = nodes[k];
        switch (nd.op) {
        case Op::var: st.push_back(x[nd.index]); break;
        case Op::constant: st.push_back(nd.value); break;
        case Op::sin: st.back() = std::sin(st.back()); break;
        case Op::cos: st.back() = std::cos(st.back()); break;
        case Op::exp: {
            const double v = std::exp(st.back());
            st.back() = v > kOutputCap ? kOutputCap : v;
            break;
        }
        case Op::log: {
            const double a = std::fabs(st.back());
            st.back() = a == 0.0 ? kOutputCap : std::log(a);
            break;
        }
        default: {
            // right-to-left walk leaves the left operand on top
            const double a = st.back();
            st.pop_back();
            const double b = st.back();
            double r = 0.0;
            switch (nd.op) {
            case Op::add: r = a + b; break;
            case Op::sub: r = a - b; break;
            case Op::mul: r = a * b; break;
            default: r = std::fabs(b) < kDivGuard ? 1.0 : a / b; break;
            }
            st.back() = r;
        }
        }
    }
    const double out = st.back();
    return std::isfinite(out) ? out : kOutputCap;
}

} // namespace

double evaluate_sample(const ProgramTree& tree, std::span<const double> x) {
    if (tree.min_width() > x.size())
        throw std::invalid_argument("evaluate_sample: tree reads beyond the input width");
    std::vector<double> st;
    st.reserve(tree.size() / 2 + 1);
    return eval_with_stack(tree, x, st);
}

std::vector<double> evaluate(const ProgramTree& tree, const Dataset& data) {
    if (tree.min_width() > data.width)
        throw std::invalid_argument("evaluate: tree reads beyond the dataset width");
    std::vector<double> out(data.samples());
    std::vector<double> st;
    st.reserve(tree.size() / 2 + 1);
    for (std::size_t s = 0; s < data.samples(); ++s)
        out[s] = eval_with_stack(tree, data.sample(s), st);
    return out;
}

std::vector<double> squared_errors(std::span<const double> yhat,
                                   std::span<const double> y) {
    if (yhat.size() != y.size())
        throw std::invalid_argument("squared_errors: length mismatch");
    std::vector<double> e(y.size());
    for (std::size_t s = 0; s < y.size(); ++s) {
        const double d = y[s] - yhat[s];
        e[s] = sanitize_error(d * d);
    }
    return e;
}

namespace {

Node random_terminal(std::size_t n_features, Rng& rng) {
    // terminal set is the n variables plus one ephemeral constant slot
    if (rng.below(n_features + 1) < n_features)
        return {Op::var, static_cast<std::uint16_t>(rng.below(n_features)), 0.0};
    return {Op::constant, 0, rng.range(-1.0, 1.0)};
}

void grow_into(std::vector<Node>& out, std::size_t n_features, std::size_t depth,
               bool full, Rng& rng) {
    const std::size_t terminals = n_features + 1;
    const bool leaf =
        depth == 0 || (!full && rng.below(terminals + 8) < terminals);
    if (leaf) {
        out.push_back(random_terminal(n_features, rng));
        return;
    }
    const Op op = static_cast<Op>(rng.below(8));
    out.push_back({op, 0, 0.0});
    for (int c = arity(op); c-- > 0;)
        grow_into(out, n_features, depth - 1, full, rng);
}

} // namespace

ProgramTree random_tree(std::size_t n_features, std::size_t depth, bool full, Rng& rng) {
    if (n_features == 0)
        throw std::invalid_argument("random_tree: need at least one feature");
    std::vector<Node> out;
    if (depth == 0) {
        out.push_back(random_terminal(n_features, rng));
    } else {
        // the root is always a function so the expression computes something
        const Op op = static_cast<Op>(rng.below(8));
        out.push_back({op, 0, 0.0});
        for (int c = arity(op); c-- > 0;)
            grow_into(out, n_features, depth - 1, full, rng);
    }
    return ProgramTree(std::move(out));
}

ProgramTree ramped_tree(std::size_t n_features, Rng& rng) {
    const std::size_t depth = 2 + rng.below(5);
    const bool full = rng.coin(0.5);
    for (int attempt = 0; attempt < 16; ++attempt) {
        auto t = random_tree(n_features, depth, full, rng);
        if (t.size() >= kMinLength && t.size() <= kMaxLength) return t;
    }
    for (int attempt = 0; attempt < 16; ++attempt) {
        auto t = random_tree(n_features, 2, false, rng);
        if (t.size() >= kMinLength && t.size() <= kMaxLength) return t;
    }
    // depth-1 binary tree always satisfies the length policy
    return random_tree(n_features, 1, true, rng);
}

ProgramTree crossover_at(const ProgramTree& a, const ProgramTree& b,
                         std::size_t at_a, std::size_t at_b) {
    if (at_a >= a.size() || at_b >= b.size())
        throw std::invalid_argument("crossover_at: position out of range");
    const std::size_t end_a = a.subtree_end(at_a);
    const std::size_t end_b = b.subtree_end(at_b);
    std::vector<Node> child;
    child.reserve(a.size() - (end_a - at_a) + (end_b - at_b));
    child.insert(child.end(), a.nodes().begin(), a.nodes().begin() + at_a);
    child.insert(child.end(), b.nodes().begin() + at_b, b.nodes().begin() + end_b);
    child.insert(child.end(), a.nodes().begin() + end_a, a.nodes().end());
    return ProgramTree(std::move(child));
}

namespace {

constexpr Op kBinary[] = {Op::add, Op::sub, Op::mul, Op::div};
constexpr Op kUnary[] = {Op::sin, Op::cos, Op::exp, Op::log};

Op different_op(std::span<const Op> pool, Op current, Rng& rng) {
    Op pick = pool[rng.below(pool.size())];
    while (pick == current) pick = pool[rng.below(pool.size())];
    return pick;
}

bool length_ok(std::size_t n) { return n >= kMinLength && n <= kMaxLength; }

ProgramTree point_mutation(const ProgramTree& p, std::size_t n_features, Rng& rng,
                           bool& changed) {
    std::vector<Node> nodes = p.nodes();
    const std::size_t k = std::max<std::size_t>(1, (nodes.size() + 5) / 10);
    auto order = rng.permutation(nodes.size());
    changed = false;
    for (std::size_t j = 0; j < k; ++j) {
        Node& nd = nodes[order[j]];
        const Node before = nd;
        switch (arity(nd.op)) {
        case 2: nd.op = different_op(kBinary, nd.op, rng); break;
        case 1: nd.op = different_op(kUnary, nd.op, rng); break;
        default: nd = random_terminal(n_features, rng); break;
        }
        changed = changed || !(nd == before);
    }
    return ProgramTree(std::move(nodes));
}

ProgramTree subtree_mutation(const ProgramTree& p, std::size_t n_features, Rng& rng) {
    for (int attempt = 0; attempt < 20; ++attempt) {
        const std::size_t at = rng.below(p.size());
        const std::size_t cut = p.subtree_end(at) - at;
        auto repl = random_tree(n_features, 1 + rng.below(2), false, rng);
        if (length_ok(p.size() - cut + repl.size()))
            return crossover_at(p, repl, at, 0);
    }
    return p;
}

} // namespace

VaryResult vary(const ProgramTree& p1, const ProgramTree& p2,
                double crossover_rate, std::size_t n_features, Rng& rng) {
    if (rng.coin(crossover_rate)) {
        for (int attempt = 0; attempt < 20; ++attempt) {
            const std::size_t at_a = rng.below(p1.size());
            const std::size_t at_b = rng.below(p2.size());
            const std::size_t len = p1.size() - (p1.subtree_end(at_a) - at_a) +
                                    (p2.subtree_end(at_b) - at_b);
            if (length_ok(len))
                return {crossover_at(p1, p2, at_a, at_b), VariationKind::crossover};
        }
        return {p1, VariationKind::crossover};
    }
    bool changed = false;
    auto child = point_mutation(p1, n_features, rng, changed);
    if (changed) return {std::move(child), VariationKind::point_mutation};
    return {subtree_mutation(p1, n_features, rng), VariationKind::subtree_mutation};
}

std::string canonical_form(const ProgramTree& tree) {
    std::ostringstream out;
    for (std::size_t k = 0; k < tree.size(); ++k) {
        if (k) out << ' ';
        const Node& nd = tree[k];
        switch (nd.op) {
        case Op::add: out << '+'; break;
        case Op::sub: out << '-'; break;
        case Op::mul: out << '*'; break;
        case Op::div: out << '/'; break;
        case Op::sin: out << "sin"; break;
        case Op::cos: out << "cos"; break;
        case Op::exp: out << "exp"; break;
        case Op::log: out << "log"; break;
        case Op::var: out << 'x' << (nd.index + 1); break;
        case Op::constant: out << 'C'; break;
        }
    }
    return out.str();
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        cur[0] = i + 1;
        for (std::size_t j = 0; j < b.size(); ++j)
            cur[j + 1] = std::min({prev[j] + (a[i] != b[j] ? 1 : 0),
                                   prev[j + 1] + 1, cur[j] + 1});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string metrics_csv_header() {
    return "generation,best_mse,norm_mse,diversity,median_case_depth,sel_time_ms";
}

std::string metrics_csv_row(const GenerationMetrics& m) {
    std::ostringstream out;
    out.precision(17);
    out << m.generation << ',' << m.best_mse << ',' << m.norm_mse << ','
        << m.diversity << ',' << m.median_case_depth << ',' << m.sel_time_ms;
    return out.str();
}

namespace {

constexpr std::uint64_t kInitSalt = 0x696e6974ull;
constexpr std::uint64_t kSelSalt = 0x73656c65ull;
constexpr std::uint64_t kVarySalt = 0x76617279ull;
constexpr std::uint64_t kParentSalt = 0x70617265ull;
constexpr std::uint64_t kFreshSalt = 0x66726573ull;
constexpr std::uint64_t kSurviveSalt = 0x73757276ull;
constexpr std::uint64_t kCrowdSalt = 0x63726f77ull;

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double ms_between(std::chrono::steady_clock::time_point a,
                  std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

} // namespace

Engine::Engine(Dataset train, EngineConfig cfg)
    : train_(std::move(train)), cfg_(cfg) {
    if (cfg_.population_size < 2)
        throw std::invalid_argument("Engine: population must hold at least two individuals");
    if (cfg_.generations == 0)
        throw std::invalid_argument("Engine: need at least one generation");
    if (cfg_.crossover_rate < 0.0 || cfg_.mutation_rate < 0.0 ||
        std::abs(cfg_.crossover_rate + cfg_.mutation_rate - 1.0) > 1e-9)
        throw std::invalid_argument("Engine: variation rates must be nonnegative and sum to 1");
    if (cfg_.tournament_size == 0)
        throw std::invalid_argument("Engine: tournament size must be positive");
    if (train_.samples() == 0 || train_.width == 0)
        throw std::invalid_argument("Engine: training data is empty");

    double mean = 0.0;
    for (double y : train_.target) mean += y;
    mean /= static_cast<double>(train_.samples());
    for (double y : train_.target) target_variance_ += (y - mean) * (y - mean);
    target_variance_ /= static_cast<double>(train_.samples());

    pop_.reserve(cfg_.population_size);
    for (std::size_t i = 0; i < cfg_.population_size; ++i) {
        Rng rng = stream(kInitSalt, 0, i);
        pop_.push_back(fresh_individual(rng));
    }
}

Rng Engine::stream(std::uint64_t salt, std::uint64_t a, std::uint64_t b) const {
    return Rng::stream(cfg_.seed ^ salt, a, b);
}

void Engine::evaluate_individual(Individual& ind) {
    ind.outputs = evaluate(ind.tree, train_);
    const auto errs = squared_errors(ind.outputs, train_.target);
    double acc = 0.0;
    for (double e : errs) acc += e;
    ind.mse = acc / static_cast<double>(errs.size());
}

Individual Engine::fresh_individual(Rng& rng) {
    Individual ind{ramped_tree(train_.width, rng), {}, 0.0, 0};
    evaluate_individual(ind);
    return ind;
}

ErrorMatrix Engine::error_matrix() const {
    std::vector<double> data;
    data.reserve(pop_.size() * train_.samples());
    for (const auto& ind : pop_) {
        const auto errs = squared_errors(ind.outputs, train_.target);
        data.insert(data.end(), errs.begin(), errs.end());
    }
    return ErrorMatrix(pop_.size(), train_.samples(), std::move(data));
}

std::vector<SelectionEvent> Engine::select(const ErrorMatrix& em, std::uint64_t gen_seed) {
    SelectionConfig scfg;
    scfg.tournament_size = cfg_.tournament_size;
    switch (cfg_.method) {
    case EngineMethod::random_uniform: scfg.method = SelectionMethod::random_uniform; break;
    case EngineMethod::tournament: scfg.method = SelectionMethod::tournament; break;
    case EngineMethod::lexicase: scfg.method = SelectionMethod::lexicase; break;
    case EngineMethod::eps_static: scfg.method = SelectionMethod::eps_static; break;
    case EngineMethod::eps_semidynamic: scfg.method = SelectionMethod::eps_semidynamic; break;
    case EngineMethod::eps_dynamic: scfg.method = SelectionMethod::eps_dynamic; break;
    default:
        throw std::invalid_argument("Engine::select: method has its own survival step");
    }
    return select_parents(em, scfg, gen_seed);
}

void Engine::step() {
    switch (cfg_.method) {
    case EngineMethod::age_fitness_pareto: step_age_fitness(); break;
    case EngineMethod::deterministic_crowding: step_crowding(); break;
    default: step_generational(); break;
    }
}

void Engine::run() {
    for (std::size_t g = 0; g < cfg_.generations; ++g) step();
}

void Engine::step_generational() {
    const auto em = error_matrix();
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t sel_seed = stream(kSelSalt, generation_).next();
    const auto events = select(em, sel_seed);
    const auto t1 = std::chrono::steady_clock::now();

    const std::size_t n = pop_.size();
    std::vector<Individual> children;
    children.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = stream(kVarySalt, generation_, i);
        auto res = vary(pop_[events[i].selected].tree,
                        pop_[events[(i + 1) % n].selected].tree,
                        cfg_.crossover_rate, train_.width, rng);
        Individual child{std::move(res.child), {}, 0.0, 0};
        evaluate_individual(child);
        children.push_back(std::move(child));
    }

    if (cfg_.keep_best) {
        const Individual& incumbent = best();
        std::size_t best_c = 0, worst_c = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (children[i].mse < children[best_c].mse) best_c = i;
            if (children[i].mse > children[worst_c].mse) worst_c = i;
        }
        if (incumbent.mse < children[best_c].mse) children[worst_c] = incumbent;
    }

    pop_ = std::move(children);
    ++generation_;
    record_metrics(events, ms_between(t0, t1));
}

void Engine::step_age_fitness() {
    const std::size_t n = pop_.size();
    std::vector<Individual> pool;
    pool.reserve(2 * n + 1);
    for (auto& ind : pop_) pool.push_back(std::move(ind));

    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = stream(kParentSalt, generation_, i);
        const std::size_t a = rng.below(n);
        const std::size_t b = rng.below(n);
        auto res = vary(pool[a].tree, pool[b].tree, cfg_.crossover_rate,
                        train_.width, rng);
        Individual child{std::move(res.child), {}, 0.0,
                         std::max(pool[a].age, pool[b].age)};
        evaluate_individual(child);
        pool.push_back(std::move(child));
    }
    {
        Rng rng = stream(kFreshSalt, generation_);
        pool.push_back(fresh_individual(rng)); // age 0 by construction
    }

    const auto t0 = std::chrono::steady_clock::now();
    Rng rng = stream(kSurviveSalt, generation_);
    while (pool.size() > n) {
        std::vector<char> dead(pool.size(), 0);
        std::size_t kills = 0;
        const auto perm = rng.permutation(pool.size());
        for (std::size_t k = 0; k + 1 < perm.size() && pool.size() - kills > n; k += 2) {
            const std::size_t a = perm[k], b = perm[k + 1];
            const double va[2] = {static_cast<double>(pool[a].age), pool[a].mse};
            const double vb[2] = {static_cast<double>(pool[b].age), pool[b].mse};
            if (dominates(va, vb)) {
                dead[b] = 1;
                ++kills;
            } else if (dominates(vb, va)) {
                dead[a] = 1;
                ++kills;
            }
        }
        if (kills == 0) {
            // the whole pool can be mutually non-dominated; cull one at
            // random so survival always terminates
            dead[rng.below(pool.size())] = 1;
        }
        std::vector<Individual> next;
        next.reserve(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (!dead[i]) next.push_back(std::move(pool[i]));
        pool = std::move(next);
    }
    const auto t1 = std::chrono::steady_clock::now();

    for (auto& ind : pool) ++ind.age;
    pop_ = std::move(pool);
    ++generation_;
    record_metrics({}, ms_between(t0, t1));
}

void Engine::step_crowding() {
    const std::size_t n = pop_.size();
    double sel_ms = 0.0;
    Rng rng = stream(kCrowdSalt, generation_);
    const auto perm = rng.permutation(n);
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        const std::size_t pa = perm[k], pb = perm[k + 1];
        for (int c = 0; c < 2; ++c) {
            Rng vr = stream(kVarySalt, generation_, k + static_cast<std::size_t>(c));
            const std::size_t first = c == 0 ? pa : pb;
            const std::size_t second = c == 0 ? pb : pa;
            auto res = vary(pop_[first].tree, pop_[second].tree,
                            cfg_.crossover_rate, train_.width, vr);
            Individual child{std::move(res.child), {}, 0.0, 0};
            evaluate_individual(child);

            const auto t0 = std::chrono::steady_clock::now();
            const auto cf = canonical_form(child.tree);
            const std::size_t da = edit_distance(cf, canonical_form(pop_[pa].tree));
            const std::size_t db = edit_distance(cf, canonical_form(pop_[pb].tree));
            std::size_t target = da < db ? pa : db < da ? pb : (rng.coin(0.5) ? pa : pb);
            if (child.mse < pop_[target].mse) pop_[target] = std::move(child);
            sel_ms += ms_between(t0, std::chrono::steady_clock::now());
        }
    }
    ++generation_;
    record_metrics({}, sel_ms);
}

void Engine::record_metrics(const std::vector<SelectionEvent>& events, double sel_ms) {
    GenerationMetrics m;
    m.generation = generation_;
    m.best_mse = best().mse;
    m.norm_mse = target_variance_ > 0.0 ? m.best_mse / target_variance_ : m.best_mse;
    m.diversity = semantic_diversity(error_matrix());
    std::vector<double> depths;
    depths.reserve(events.size());
    for (const auto& ev : events)
        depths.push_back(static_cast<double>(ev.case_depth()));
    m.median_case_depth = median_of(std::move(depths));
    m.sel_time_ms = sel_ms;
    metrics_.push_back(m);
}

const Individual& Engine::best() const {
    std::size_t b = 0;
    for (std::size_t i = 1; i < pop_.size(); ++i)
        if (pop_[i].mse < pop_[b].mse) b = i;
    return pop_[b];
}

double Engine::mse_on(const Individual& ind, const Dataset& data) const {
    const auto yhat = evaluate(ind.tree, data);
    const auto errs = squared_errors(yhat, data.target);
    double acc = 0.0;
    for (double e : errs) acc += e;
    return acc / static_cast<double>(errs.size());
}

} // namespace lexsel::gp
