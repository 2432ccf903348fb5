#include "lexsel/pareto.hpp"

#include <stdexcept>

#include "lexicase_filter.hpp"

namespace lexsel {

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dominates: length mismatch");
    bool strict = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] > b[j]) return false;
        if (a[j] < b[j]) strict = true;
    }
    return strict;
}

bool eps_dominates(std::span<const double> a,
                   std::span<const double> b,
                   std::span<const double> eps) {
    if (a.size() != b.size() || a.size() != eps.size())
        throw std::invalid_argument("eps_dominates: length mismatch");
    bool strict = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (eps[j] < 0.0)
            throw std::invalid_argument("eps_dominates: negative epsilon");
        if (a[j] + eps[j] > b[j]) return false;
        if (a[j] + eps[j] < b[j]) strict = true;
    }
    return strict;
}

namespace {

template <typename Dominated>
std::vector<std::size_t> non_dominated(const ErrorMatrix& e, Dominated dominated_by) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < e.rows(); ++i) {
        bool dom = false;
        for (std::size_t k = 0; k < e.rows() && !dom; ++k)
            dom = k != i && dominated_by(k, i);
        if (!dom) out.push_back(i);
    }
    return out;
}

} // namespace

std::vector<std::size_t> pareto_set(const ErrorMatrix& errors) {
    return non_dominated(errors, [&](std::size_t k, std::size_t i) {
        return dominates(errors.row(k), errors.row(i));
    });
}

std::vector<std::size_t> boundary_set(const ErrorMatrix& errors) {
    std::vector<double> mins(errors.cols());
    for (std::size_t t = 0; t < errors.cols(); ++t) mins[t] = errors.column_min(t);
    std::vector<std::size_t> out;
    for (std::size_t i : pareto_set(errors)) {
        for (std::size_t t = 0; t < errors.cols(); ++t) {
            if (errors(i, t) == mins[t]) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

std::vector<std::size_t> eps_pareto_set(const ErrorMatrix& errors,
                                        const EpsilonVector& eps) {
    if (eps.size() != errors.cols())
        throw std::invalid_argument("eps_pareto_set: epsilon length mismatch");
    return non_dominated(errors, [&](std::size_t k, std::size_t i) {
        return eps_dominates(errors.row(k), errors.row(i), eps);
    });
}

std::vector<std::size_t> eps_boundary_set(const ErrorMatrix& errors,
                                          const EpsilonVector& eps) {
    std::vector<double> mins(errors.cols());
    for (std::size_t t = 0; t < errors.cols(); ++t) mins[t] = errors.column_min(t);
    std::vector<std::size_t> out;
    for (std::size_t i : eps_pareto_set(errors, eps)) {
        for (std::size_t t = 0; t < errors.cols(); ++t) {
            if (detail::within_cut(errors(i, t), mins[t] + eps[t])) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

} // namespace lexsel
