#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hypersec {

/// Per-row column supports of a square Jacobian. Every row must contain its
/// own diagonal index; supports are kept sorted and duplicate-free.
class SparsityPattern {
public:
    SparsityPattern() = default;
    /// Normalizes (sorts, dedups) and validates. Throws std::invalid_argument.
    explicit SparsityPattern(std::vector<std::vector<std::size_t>> row_support);

    static SparsityPattern dense(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] std::span<const std::size_t> row(std::size_t i) const noexcept { return rows_[i]; }
    [[nodiscard]] std::size_t row_length(std::size_t i) const noexcept { return rows_[i].size(); }
    [[nodiscard]] std::size_t max_row_length() const noexcept;
    [[nodiscard]] bool contains(std::size_t i, std::size_t j) const noexcept;

    /// Column-to-rows incidence (transpose structure).
    [[nodiscard]] std::vector<std::vector<std::size_t>> column_rows() const;
    /// Union of the pattern with its transpose.
    [[nodiscard]] SparsityPattern symmetrized() const;

    friend bool operator==(const SparsityPattern&, const SparsityPattern&) = default;

private:
    std::vector<std::vector<std::size_t>> rows_;
};

[[nodiscard]] SparsityPattern tridiagonal_pattern(std::size_t n);
/// Tridiagonal plus the (0, 2) entry coupling the on-axis boundary row.
[[nodiscard]] SparsityPattern transport_pattern(std::size_t n);

struct ColumnColoring {
    std::vector<std::size_t> color_of;
    std::size_t num_colors = 0;

    [[nodiscard]] std::vector<std::size_t> columns_with(std::size_t color) const;
    friend bool operator==(const ColumnColoring&, const ColumnColoring&) = default;
};

/// Greedy first-fit over columns in ascending index order; columns that share
/// a row never share a color.
[[nodiscard]] ColumnColoring greedy_color_columns(const SparsityPattern& pattern);

[[nodiscard]] bool is_structurally_orthogonal(const SparsityPattern& pattern,
                                              const ColumnColoring& coloring);

}  // namespace hypersec
