#include "hypersec/sparsity.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hypersec {

SparsityPattern::SparsityPattern(std::vector<std::vector<std::size_t>> row_support)
    : rows_(std::move(row_support)) {
    const std::size_t n = rows_.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto& r = rows_[i];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        if (!r.empty() && r.back() >= n)
            throw std::invalid_argument("SparsityPattern: column index out of range in row " +
                                        std::to_string(i));
        if (!std::binary_search(r.begin(), r.end(), i))
            throw std::invalid_argument("SparsityPattern: row " + std::to_string(i) +
                                        " is missing its diagonal");
    }
}

SparsityPattern SparsityPattern::dense(std::size_t n) {
    std::vector<std::vector<std::size_t>> rows(n);
    for (auto& r : rows)
        for (std::size_t j = 0; j < n; ++j) r.push_back(j);
    return SparsityPattern(std::move(rows));
}

std::size_t SparsityPattern::max_row_length() const noexcept {
    std::size_t m = 0;
    for (const auto& r : rows_) m = std::max(m, r.size());
    return m;
}

bool SparsityPattern::contains(std::size_t i, std::size_t j) const noexcept {
    if (i >= rows_.size()) return false;
    return std::binary_search(rows_[i].begin(), rows_[i].end(), j);
}

std::vector<std::vector<std::size_t>> SparsityPattern::column_rows() const {
    std::vector<std::vector<std::size_t>> cols(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j : rows_[i]) cols[j].push_back(i);
    return cols;
}

SparsityPattern SparsityPattern::symmetrized() const {
    auto rows = rows_;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j : rows_[i]) rows[j].push_back(i);
    return SparsityPattern(std::move(rows));
}

SparsityPattern tridiagonal_pattern(std::size_t n) {
    if (n < 2) throw std::invalid_argument("tridiagonal_pattern: n must be at least 2");
    std::vector<std::vector<std::size_t>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) rows[i].push_back(i - 1);
        rows[i].push_back(i);
        if (i + 1 < n) rows[i].push_back(i + 1);
    }
    return SparsityPattern(std::move(rows));
}

SparsityPattern transport_pattern(std::size_t n) {
    if (n < 3) throw std::invalid_argument("transport_pattern: n must be at least 3");
    std::vector<std::vector<std::size_t>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) rows[i].push_back(i - 1);
        rows[i].push_back(i);
        if (i + 1 < n) rows[i].push_back(i + 1);
    }
    rows[0].push_back(2);
    return SparsityPattern(std::move(rows));
}

std::vector<std::size_t> ColumnColoring::columns_with(std::size_t color) const {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < color_of.size(); ++j)
        if (color_of[j] == color) cols.push_back(j);
    return cols;
}

ColumnColoring greedy_color_columns(const SparsityPattern& pattern) {
    const std::size_t n = pattern.size();
    constexpr std::size_t kUncolored = static_cast<std::size_t>(-1);
    const auto col_rows = pattern.column_rows();
    ColumnColoring coloring{std::vector<std::size_t>(n, kUncolored), 0};
    std::vector<std::size_t> seen_at(n + 1, kUncolored);  // color -> last column that saw it

    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i : col_rows[j])
            for (std::size_t k : pattern.row(i))
                if (coloring.color_of[k] != kUncolored) seen_at[coloring.color_of[k]] = j;
        std::size_t c = 0;
        while (seen_at[c] == j) ++c;
        coloring.color_of[j] = c;
        coloring.num_colors = std::max(coloring.num_colors, c + 1);
    }
    return coloring;
}

bool is_structurally_orthogonal(const SparsityPattern& pattern, const ColumnColoring& coloring) {
    if (coloring.color_of.size() != pattern.size()) return false;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const auto r = pattern.row(i);
        for (std::size_t a = 0; a < r.size(); ++a) {
            if (coloring.color_of[r[a]] >= coloring.num_colors) return false;
            for (std::size_t b = a + 1; b < r.size(); ++b)
                if (coloring.color_of[r[a]] == coloring.color_of[r[b]]) return false;
        }
    }
    return true;
}

}  // namespace hypersec
