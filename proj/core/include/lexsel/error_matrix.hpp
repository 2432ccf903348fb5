#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lexsel {

/// Per-case error threshold vector, one entry per training case.
using EpsilonVector = std::vector<double>;

/// Per-individual scalar fitness (lower is better).
using FitnessVector = std::vector<double>;

/// Dense row-major matrix of nonnegative finite errors.
///
/// Rows are individuals, columns are training cases. This is the common
/// currency between the selection operators, the probability analysis and
/// the dominance predicates. By convention the engine stores squared errors;
/// analyses of absolute-error data simply construct the matrix from absolute
/// values, nothing downstream cares which convention produced the entries.
class ErrorMatrix {
public:
    /// Validates shape and entries: throws std::invalid_argument when the
    /// matrix is empty, data.size() != rows*cols, or any entry is negative
    /// or non-finite.
    ErrorMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t t) const {
        return data_[i * cols_ + t];
    }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    std::vector<double> column(std::size_t t) const;

    /// Smallest entry of column t.
    double column_min(std::size_t t) const;

    /// Parse "rows = individuals, columns = cases" CSV with no header row.
    /// Ragged rows, empty cells or non-numeric cells are rejected with a
    /// message naming the offending line.
    static ErrorMatrix from_csv(const std::string& path);
    static ErrorMatrix from_csv_text(const std::string& text);

    /// Round-trippable CSV (17 significant digits, no header).
    std::string to_csv() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Replaces a non-finite evaluation result with the large finite penalty
/// used throughout the library.
inline constexpr double kErrorPenalty = 1e30;
double sanitize_error(double e);

/// Median absolute deviation from the median. Even-length medians average
/// the two middle order statistics. Throws on an empty input.
double mad(std::span<const double> values);

/// Per-case MAD of the error columns over the whole population (the
/// aggregate threshold vector used by the static and semi-dynamic variants).
EpsilonVector epsilon_static(const ErrorMatrix& errors);

/// MAD of column t restricted to `pool` (row indices). Throws when pool is
/// empty or contains an out-of-range row.
double epsilon_pool(const ErrorMatrix& errors,
                    std::span<const std::size_t> pool,
                    std::size_t t);

enum class FitnessMetric {
    mean_of_values,         // row mean of the stored entries
    mean_of_absolute_roots, // row mean of sqrt(entry); recovers absolute
                            // error aggregates from squared-error storage
};

/// Scalar per-row aggregate of the error matrix (lower is better).
FitnessVector aggregate_fitness(const ErrorMatrix& errors, FitnessMetric metric);

/// Fraction of distinct error rows, in [1/N, 1]. Rows compare by exact
/// bitwise equality of their stored values.
double semantic_diversity(const ErrorMatrix& errors);

} // namespace lexsel
