#pragma once

// Shared case-by-case filtering loop behind the lexicase family. The
// selection operators, the exhaustive order enumeration and the Monte-Carlo
// estimator all run the exact same steps, so agreement between them tests
// only the math, not parallel reimplementations of the loop.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lexsel/error_matrix.hpp"
#include "lexsel/selection.hpp"

namespace lexsel::detail {

using Pool = std::vector<std::uint32_t>;

// Pass rule for every epsilon threshold: e <= cut up to a few ulps, so a
// candidate sitting mathematically on the cut survives even when the cut was
// assembled from rounded decimals (1.1 vs 1.0 + mad() = 0.1 differs by one
// ulp). The slack is far below any genuine gap between distinct errors.
inline bool within_cut(double e, double cut) {
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() *
                         std::max({1.0, std::fabs(e), std::fabs(cut)});
    return e <= cut + slack;
}

inline Pool full_pool(std::size_t n) {
    Pool p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
    return p;
}

// keep pool members whose error equals the pool minimum exactly
struct ExactStep {
    const ErrorMatrix* e;
    void operator()(Pool& pool, std::size_t t) const {
        double m = (*e)(pool[0], t);
        for (auto i : pool) m = std::min(m, (*e)(i, t));
        std::erase_if(pool, [&](std::uint32_t i) { return (*e)(i, t) != m; });
    }
};

// keep pool members whose pass flag equals the pool minimum (pass matrix
// thresholds were fixed against the whole population up front)
struct PassStep {
    const PassMatrix* f;
    void operator()(Pool& pool, std::size_t t) const {
        std::uint8_t m = 1;
        for (auto i : pool) m = std::min(m, (*f)(i, t));
        std::erase_if(pool, [&](std::uint32_t i) { return (*f)(i, t) != m; });
    }
};

// keep pool members within eps[t] of the pool-elite error
struct EpsStep {
    const ErrorMatrix* e;
    const double* eps;
    void operator()(Pool& pool, std::size_t t) const {
        double m = (*e)(pool[0], t);
        for (auto i : pool) m = std::min(m, (*e)(i, t));
        const double cut = m + eps[t];
        std::erase_if(pool, [&](std::uint32_t i) { return !within_cut((*e)(i, t), cut); });
    }
};

// like EpsStep, but the threshold is the MAD of the column restricted to
// the current pool, recomputed before every filter
struct DynamicStep {
    const ErrorMatrix* e;
    mutable std::vector<double> scratch;
    void operator()(Pool& pool, std::size_t t) const {
        scratch.clear();
        double m = (*e)(pool[0], t);
        for (auto i : pool) {
            const double v = (*e)(i, t);
            m = std::min(m, v);
            scratch.push_back(v);
        }
        const double cut = m + mad(scratch);
        std::erase_if(pool, [&](std::uint32_t i) { return !within_cut((*e)(i, t), cut); });
    }
};

// Consumes cases from `order` until one candidate remains or cases run out.
// Returns how many cases were considered.
template <typename Step>
std::size_t filter_by_order(Pool& pool, std::span<const std::size_t> order, const Step& step) {
    std::size_t used = 0;
    for (std::size_t t : order) {
        if (pool.size() <= 1) break;
        step(pool, t);
        ++used;
    }
    return used;
}

} // namespace lexsel::detail
