#include "lexsel/error_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_set>

namespace lexsel {

ErrorMatrix::ErrorMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ == 0 || cols_ == 0)
        throw std::invalid_argument("ErrorMatrix: need at least one row and one column");
    if (data_.size() != rows_ * cols_)
        throw std::invalid_argument("ErrorMatrix: data size does not match rows*cols");
    for (double v : data_) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("ErrorMatrix: entries must be finite and nonnegative");
    }
}

std::vector<double> ErrorMatrix::column(std::size_t t) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, t);
    return c;
}

double ErrorMatrix::column_min(std::size_t t) const {
    double m = (*this)(0, t);
    for (std::size_t i = 1; i < rows_; ++i) m = std::min(m, (*this)(i, t));
    return m;
}

namespace {

double parse_cell(const std::string& cell, std::size_t line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("ErrorMatrix: non-numeric cell on line " +
                                    std::to_string(line_no));
    }
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size())
        throw std::invalid_argument("ErrorMatrix: trailing junk in cell on line " +
                                    std::to_string(line_no));
    return v;
}

} // namespace

ErrorMatrix ErrorMatrix::from_csv_text(const std::string& text) {
    std::vector<double> data;
    std::size_t rows = 0, cols = 0;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t row_cols = 0;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            if (cell.find_first_not_of(" \t") == std::string::npos)
                throw std::invalid_argument("ErrorMatrix: empty cell on line " +
                                            std::to_string(line_no));
            data.push_back(parse_cell(cell, line_no));
            ++row_cols;
        }
        if (cols == 0) cols = row_cols;
        else if (row_cols != cols)
            throw std::invalid_argument("ErrorMatrix: ragged row on line " +
                                        std::to_string(line_no));
        ++rows;
    }
    if (rows == 0) throw std::invalid_argument("ErrorMatrix: no data rows");
    return ErrorMatrix(rows, cols, std::move(data));
}

ErrorMatrix ErrorMatrix::from_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("ErrorMatrix: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return from_csv_text(buf.str());
}

std::string ErrorMatrix::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t t = 0; t < cols_; ++t) {
            if (t) out << ',';
            out << (*this)(i, t);
        }
        out << '\n';
    }
    return out.str();
}

double sanitize_error(double e) {
    return std::isfinite(e) ? e : kErrorPenalty;
}

namespace {

// median of an unsorted scratch buffer; mutates it
double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    auto mid = v.begin() + n / 2;
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    double hi = *mid;
    double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

} // namespace

double mad(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mad: empty input");
    std::vector<double> scratch(values.begin(), values.end());
    const double med = median_inplace(scratch);
    for (double& v : scratch) v = std::abs(v - med);
    return median_inplace(scratch);
}

EpsilonVector epsilon_static(const ErrorMatrix& errors) {
    EpsilonVector eps(errors.cols());
    for (std::size_t t = 0; t < errors.cols(); ++t) {
        auto col = errors.column(t);
        eps[t] = mad(col);
    }
    return eps;
}

double epsilon_pool(const ErrorMatrix& errors,
                    std::span<const std::size_t> pool,
                    std::size_t t) {
    if (pool.empty()) throw std::invalid_argument("epsilon_pool: empty pool");
    std::vector<double> vals;
    vals.reserve(pool.size());
    for (std::size_t i : pool) {
        if (i >= errors.rows())
            throw std::invalid_argument("epsilon_pool: row index out of range");
        vals.push_back(errors(i, t));
    }
    return mad(vals);
}

FitnessVector aggregate_fitness(const ErrorMatrix& errors, FitnessMetric metric) {
    FitnessVector f(errors.rows());
    for (std::size_t i = 0; i < errors.rows(); ++i) {
        double acc = 0.0;
        for (double v : errors.row(i))
            acc += metric == FitnessMetric::mean_of_values ? v : std::sqrt(v);
        f[i] = acc / static_cast<double>(errors.cols());
    }
    return f;
}

double semantic_diversity(const ErrorMatrix& errors) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(errors.rows());
    for (std::size_t i = 0; i < errors.rows(); ++i) {
        auto r = errors.row(i);
        seen.emplace(reinterpret_cast<const char*>(r.data()), r.size() * sizeof(double));
    }
    return static_cast<double>(seen.size()) / static_cast<double>(errors.rows());
}

} // namespace lexsel
