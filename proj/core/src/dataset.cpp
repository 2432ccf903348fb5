#include "lexsel/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lexsel/rng.hpp"

namespace lexsel {

Dataset Dataset::subset(std::span<const std::size_t> idx) const {
    Dataset out;
    out.feature_names = feature_names;
    out.width = width;
    out.features.reserve(idx.size() * width);
    out.target.reserve(idx.size());
    for (std::size_t s : idx) {
        auto row = sample(s);
        out.features.insert(out.features.end(), row.begin(), row.end());
        out.target.push_back(target[s]);
    }
    return out;
}

std::string Dataset::to_csv(const std::string& target_name) const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t f = 0; f < width; ++f) out << feature_names[f] << ',';
    out << target_name << '\n';
    for (std::size_t s = 0; s < samples(); ++s) {
        for (double v : sample(s)) out << v << ',';
        out << target[s] << '\n';
    }
    return out.str();
}

namespace {

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_number(const std::string& cell, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(cell, &pos);
    } catch (const std::exception&) {
        return false;
    }
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    return pos == cell.size() && std::isfinite(out);
}

std::string trimmed(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
}

} // namespace

LoadReport load_csv_text(const std::string& text, const std::string& target) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("load_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    for (auto& h : split_cells(line)) header.push_back(trimmed(h));
    std::size_t target_col = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == target) target_col = c;
    if (target_col == header.size())
        throw std::invalid_argument("load_csv: no column named '" + target + "'");

    LoadReport report;
    report.data.width = header.size() - 1;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != target_col) report.data.feature_names.push_back(header[c]);

    std::vector<double> row(header.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_cells(line);
        bool ok = cells.size() == header.size();
        for (std::size_t c = 0; ok && c < cells.size(); ++c)
            ok = parse_number(cells[c], row[c]);
        if (!ok) {
            ++report.rejected_rows;
            continue;
        }
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (c != target_col) report.data.features.push_back(row[c]);
        report.data.target.push_back(row[target_col]);
    }
    if (report.data.target.empty())
        throw std::invalid_argument("load_csv: no usable data rows");
    return report;
}

LoadReport load_csv(const std::string& path, const std::string& target) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("load_csv: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return load_csv_text(buf.str(), target);
}

Dataset gen_uball5d(std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("gen_uball5d: need at least one sample");
    Dataset d;
    d.width = 5;
    d.feature_names = {"x1", "x2", "x3", "x4", "x5"};
    d.features.reserve(samples * 5);
    d.target.reserve(samples);
    Rng rng = Rng::stream(seed, 0x5dba11);
    for (std::size_t s = 0; s < samples; ++s) {
        double ss = 0.0;
        for (std::size_t f = 0; f < 5; ++f) {
            const double x = rng.range(0.05, 6.05);
            d.features.push_back(x);
            ss += (x - 3.0) * (x - 3.0);
        }
        d.target.push_back(10.0 / (5.0 + ss));
    }
    return d;
}

SplitIndices train_test_split(std::size_t samples, double train_fraction,
                              std::uint64_t seed) {
    if (samples < 2)
        throw std::invalid_argument("train_test_split: need at least two samples");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_test_split: fraction must be in (0, 1)");
    Rng rng = Rng::stream(seed, 0x5b117);
    auto perm = rng.permutation(samples);
    auto n_train = static_cast<std::size_t>(
        std::lround(train_fraction * static_cast<double>(samples)));
    n_train = std::clamp<std::size_t>(n_train, 1, samples - 1);
    SplitIndices split;
    split.train.assign(perm.begin(), perm.begin() + n_train);
    split.test.assign(perm.begin() + n_train, perm.end());
    return split;
}

} // namespace lexsel
