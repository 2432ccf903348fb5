#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lexsel/probability.hpp"
#include "lexsel/rng.hpp"
#include "support/golden.hpp"

using namespace lexsel;

// absolute-difference check that still prints the values on failure
#define CHECK_CLOSE(a, b, tol) CHECK(std::fabs((a) - (b)) <= (tol))

namespace {

ErrorMatrix golden_abs() {
    return {golden::kAbsRows, golden::kAbsCols,
            {golden::kAbsErrors.begin(), golden::kAbsErrors.end()}};
}

ErrorMatrix golden_clu() {
    return {golden::kCluRows, golden::kCluCols,
            {golden::kCluErrors.begin(), golden::kCluErrors.end()}};
}

ErrorMatrix random_matrix(Rng& rng, std::size_t max_rows, std::size_t max_cols,
                          int value_range) {
    const std::size_t rows = 2 + rng.below(max_rows - 1);
    const std::size_t cols = 1 + rng.below(max_cols);
    std::vector<double> data(rows * cols);
    for (auto& x : data) x = static_cast<double>(rng.below(value_range));
    return {rows, cols, std::move(data)};
}

} // namespace

// Exact tournament probabilities by enumerating every one of the N^r draws
// and splitting each draw's weight over its tied winners by multiplicity.
namespace oracle {

ProbabilityVector tournament(const FitnessVector& f, std::size_t r) {
    const std::size_t n = f.size();
    ProbabilityVector p(n, 0.0);
    std::vector<std::size_t> draw(r, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < r; ++i) total *= n;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (auto& d : draw) {
            d = c % n;
            c /= n;
        }
        double best = f[draw[0]];
        for (const auto d : draw) best = std::min(best, f[d]);
        std::size_t ties = 0;
        for (const auto d : draw) ties += f[d] == best;
        for (const auto d : draw)
            if (f[d] == best) p[d] += 1.0 / (static_cast<double>(total) * ties);
    }
    return p;
}

} // namespace oracle

TEST_CASE("exact lexicase on hand-solvable matrices") {
    CHECK(p_lex_exact(ErrorMatrix(1, 1, {4})) == ProbabilityVector{1.0});
    CHECK(p_lex_exact(ErrorMatrix(2, 1, {0, 1})) == ProbabilityVector{1.0, 0.0});
    CHECK(p_lex_exact(ErrorMatrix(2, 1, {3, 3})) == ProbabilityVector{0.5, 0.5});
    CHECK(p_lex_exact(ErrorMatrix(2, 2, {0, 1, 1, 0})) == ProbabilityVector{0.5, 0.5});
    // one row weakly best everywhere wins outright
    CHECK(p_lex_exact(ErrorMatrix(3, 2, {0, 0, 0, 1, 1, 1})) ==
          ProbabilityVector{1.0, 0.0, 0.0});
}

TEST_CASE("exact lexicase matches order enumeration on random matrices") {
    Rng rng(401);
    for (int trial = 0; trial < 60; ++trial) {
        const auto em = random_matrix(rng, 7, 5, 4);
        const auto exact = p_lex_exact(em);
        const auto enumerated = p_lex_enumerate(em, SelectionMethod::lexicase);
        REQUIRE(exact.size() == em.rows());
        CHECK(is_probability_vector(exact));
        CHECK(is_probability_vector(enumerated, 1e-6));
        for (std::size_t i = 0; i < exact.size(); ++i)
            CHECK_CLOSE(exact[i], enumerated[i], 1e-9);
    }
}

TEST_CASE("static-variant exact recursion matches order enumeration") {
    Rng rng(402);
    for (int trial = 0; trial < 40; ++trial) {
        const auto em = random_matrix(rng, 7, 5, 4);
        const auto exact = p_lex_exact(em, Elitism::pass_matrix);
        const auto enumerated = p_lex_enumerate(em, SelectionMethod::eps_static);
        for (std::size_t i = 0; i < exact.size(); ++i)
            CHECK_CLOSE(exact[i], enumerated[i], 1e-9);

        // dispatcher equals the explicit pass-matrix overload
        const auto direct = p_lex_exact(build_pass_matrix(em, epsilon_static(em)));
        CHECK(exact == direct);
    }
}

TEST_CASE("exact lexicase is invariant to column permutation and duplication") {
    Rng rng(403);
    for (int trial = 0; trial < 40; ++trial) {
        const auto em = random_matrix(rng, 7, 4, 4);
        const auto base = p_lex_exact(em);

        // columns in reverse order
        std::vector<double> rev(em.rows() * em.cols());
        for (std::size_t i = 0; i < em.rows(); ++i)
            for (std::size_t t = 0; t < em.cols(); ++t)
                rev[i * em.cols() + t] = em(i, em.cols() - 1 - t);
        const auto p_rev = p_lex_exact(ErrorMatrix(em.rows(), em.cols(), std::move(rev)));
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK_CLOSE(base[i], p_rev[i], 1e-12);

        // appending a constant column never changes the outcome
        std::vector<double> wide;
        for (std::size_t i = 0; i < em.rows(); ++i) {
            wide.insert(wide.end(), em.row(i).begin(), em.row(i).end());
            wide.push_back(2.0);
        }
        const auto p_wide = p_lex_exact(ErrorMatrix(em.rows(), em.cols() + 1, std::move(wide)));
        for (std::size_t i = 0; i < base.size(); ++i)
            CHECK_CLOSE(base[i], p_wide[i], 1e-12);
    }
}

TEST_CASE("exact lexicase depends only on within-column error order") {
    Rng rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        const auto em = random_matrix(rng, 7, 4, 5);
        std::vector<double> squared(em.rows() * em.cols());
        for (std::size_t i = 0; i < em.rows(); ++i)
            for (std::size_t t = 0; t < em.cols(); ++t)
                squared[i * em.cols() + t] = em(i, t) * em(i, t);
        const auto p1 = p_lex_exact(em);
        const auto p2 = p_lex_exact(ErrorMatrix(em.rows(), em.cols(), std::move(squared)));
        CHECK(p1 == p2);
    }
}

TEST_CASE("capacity guards throw toward the sampling estimator") {
    const ErrorMatrix wide(2, 21, std::vector<double>(42, 1.0));
    CHECK_THROWS_AS((void)p_lex_exact(wide), CapacityError);
    CHECK_NOTHROW((void)p_lex_exact(wide, ExactLimits{.max_individuals = 64, .max_cases = 32}));

    const ErrorMatrix nine(2, 9, std::vector<double>(18, 1.0));
    CHECK_THROWS_AS((void)p_lex_enumerate(nine, SelectionMethod::lexicase), CapacityError);
    CHECK_NOTHROW((void)p_lex_enumerate(nine, SelectionMethod::lexicase, {}, 9));

    CHECK_THROWS_AS((void)p_lex_enumerate(nine, SelectionMethod::tournament),
                    std::invalid_argument);
}

TEST_CASE("order enumeration of the clustered example lands on exact fractions") {
    const auto em = golden_clu();
    // 5 cases -> 120 orders; every probability is an integer count of orders
    for (const auto variant : {SelectionMethod::lexicase, SelectionMethod::eps_static,
                               SelectionMethod::eps_semidynamic, SelectionMethod::eps_dynamic}) {
        const auto p = p_lex_enumerate(em, variant);
        CHECK(is_probability_vector(p, 1e-6));
        for (const auto v : p) {
            const double count = v * 120.0;
            CHECK(std::fabs(count - std::round(count)) < 1e-6);
        }
    }
}

TEST_CASE("sampling estimator agrees with enumeration on the clustered example") {
    const auto em = golden_clu();
    const std::size_t trials = 40000;
    for (const auto variant : {SelectionMethod::lexicase, SelectionMethod::eps_static,
                               SelectionMethod::eps_semidynamic, SelectionMethod::eps_dynamic}) {
        const auto truth = p_lex_enumerate(em, variant);
        const auto mc = p_lex_monte_carlo(em, variant, {}, trials, 424242);
        REQUIRE(mc.p.size() == truth.size());
        for (std::size_t i = 0; i < truth.size(); ++i) {
            // pinned seed, so this is a deterministic regression check
            const double sigma = std::sqrt(truth[i] * (1 - truth[i]) / trials);
            CHECK(std::fabs(mc.p[i] - truth[i]) <= std::max(3 * sigma, 1e-12));
            CHECK(mc.stderrs[i] ==
                  doctest::Approx(std::sqrt(mc.p[i] * (1 - mc.p[i]) / trials)));
        }
    }
}

TEST_CASE("tournament probabilities match brute-force draw enumeration") {
    Rng rng(405);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.below(5);
        const std::size_t r = 1 + rng.below(3);
        FitnessVector f(n);
        for (auto& x : f) x = static_cast<double>(rng.below(4));
        const auto fast = p_tournament(f, r);
        const auto slow = oracle::tournament(f, r);
        REQUIRE(fast.size() == n);
        CHECK(is_probability_vector(fast));
        for (std::size_t i = 0; i < n; ++i)
            CHECK_CLOSE(fast[i], slow[i], 1e-12);
    }
}

TEST_CASE("tournament hand values") {
    const FitnessVector mean(golden::kAbsMeanError.begin(), golden::kAbsMeanError.end());
    const auto p = p_tournament(mean, 2);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK_CLOSE(p[i], golden::kAbsPtourn[i], 1e-9);

    // size-1 tournaments are uniform
    const auto u = p_tournament(mean, 1);
    for (const auto v : u) CHECK(v == doctest::Approx(0.2));

    CHECK_THROWS_AS((void)p_tournament(mean, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)p_tournament(FitnessVector{}, 2), std::invalid_argument);
}

TEST_CASE("first-case appearance probability") {
    CHECK(p_first(10, 10) == doctest::Approx(golden::kPFirst10x10).epsilon(1e-9));
    CHECK(p_first(1, 5) == 1.0);
    CHECK(p_first(1433, 1000) > golden::kPFirstLo);
    CHECK(p_first(1433, 1000) < golden::kPFirstHi);

    for (std::size_t t = 1; t <= 12; ++t)
        for (std::size_t n = 1; n < 12; ++n) {
            CHECK(p_first(t, n) <= p_first(t, n + 1)); // more events help
            CHECK(p_first(t + 1, n) <= p_first(t, n)); // more cases hurt
        }
}

TEST_CASE("elite case sets") {
    const auto abs = elite_case_sets(golden_abs());
    REQUIRE(abs.cases_of.size() == golden::kAbsRows);
    for (std::size_t i = 0; i < golden::kAbsRows; ++i) {
        std::vector<std::size_t> expect;
        for (const auto t : golden::kAbsEliteCases[i])
            if (t >= 0) expect.push_back(static_cast<std::size_t>(t));
        CHECK(abs.cases_of[i] == expect);
    }

    // with a slack vector the sets are exactly the zero flags of the pass matrix
    const auto em = golden_clu();
    const auto eps = epsilon_static(em);
    const auto near = elite_case_sets(em, eps);
    for (std::size_t i = 0; i < em.rows(); ++i) {
        std::vector<std::size_t> expect;
        for (std::size_t t = 0; t < em.cols(); ++t)
            if (golden::kCluPassFlags[i * em.cols() + t] == 0) expect.push_back(t);
        CHECK(near.cases_of[i] == expect);
    }
}

TEST_CASE("is_probability_vector") {
    CHECK(is_probability_vector({0.5, 0.5}));
    CHECK(is_probability_vector({1.0}));
    CHECK(!is_probability_vector({0.6, 0.6}));
    CHECK(!is_probability_vector({-0.1, 1.1}));
    CHECK(!is_probability_vector({}));
}
