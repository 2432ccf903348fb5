#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lexsel {

/// Row-major tabular regression data: `samples() x width()` feature block
/// plus one target value per sample.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<double> features;
    std::vector<double> target;
    std::size_t width = 0;

    std::size_t samples() const { return target.size(); }
    std::span<const double> sample(std::size_t s) const {
        return {features.data() + s * width, width};
    }

    /// Subset by sample indices, preserving order.
    Dataset subset(std::span<const std::size_t> idx) const;

    /// Header + rows, features first and the target last.
    std::string to_csv(const std::string& target_name = "y") const;
};

struct LoadReport {
    Dataset data;
    /// Rows dropped for having the wrong arity or non-numeric cells.
    std::size_t rejected_rows = 0;
};

/// Loads a CSV with a header row; `target` names the target column, every
/// other column becomes a feature. Throws std::invalid_argument when the
/// file is missing, the target column is absent, or no usable row remains.
LoadReport load_csv(const std::string& path, const std::string& target);
LoadReport load_csv_text(const std::string& text, const std::string& target);

/// Five uniform inputs on [0.05, 6.05] with target 10 / (5 + sum (x_i - 3)^2),
/// so targets live in (0, 2].
Dataset gen_uball5d(std::size_t samples, std::uint64_t seed);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded shuffle split. Both sides keep at least one sample for any
/// fraction in (0, 1); the same (samples, fraction, seed) triple always
/// produces the same partition.
SplitIndices train_test_split(std::size_t samples, double train_fraction,
                              std::uint64_t seed);

} // namespace lexsel
